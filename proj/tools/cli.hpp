#pragma once

// The smfdfa command-line tool. run() is kept separate from main() so the
// test suites can drive commands in-process.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smfdfa/smfdfa.hpp"

namespace smfdfa::cli {

namespace fs = std::filesystem;
using io::json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { ok = 0, input_error = 2, numerical_error = 3 };

/// Everything a command needs to reproduce its output.
struct Settings {
    std::string input_kind = "price";
    CsvConfig csv;
    ChangePointConfig changepoint;
    MfdfaConfig mfdfa;
    SurrogateKind surrogate_kind = SurrogateKind::shuffle;
    std::size_t surrogates = 0;
    PipelineConfig forecast;
    std::optional<std::vector<std::size_t>> breaks;
    bool fa = false;
};

inline json snapshot(const Settings& s) {
    json csv{{"date_column", s.csv.date_column},
             {"value_column", s.csv.value_column},
             {"date_format", s.csv.date_format}};
    return json{{"input_kind", s.input_kind},
                {"csv", csv},
                {"changepoint", io::to_json(s.changepoint)},
                {"mfdfa", io::to_json(s.mfdfa)},
                {"surrogate", {{"kind", to_string(s.surrogate_kind)}, {"n", s.surrogates}}},
                {"forecast", io::to_json(s.forecast)},
                {"breaks", s.breaks ? json(*s.breaks) : json("auto")},
                {"fa", s.fa}};
}

inline void apply_config(const json& j, Settings& s) {
    io::detail::read(j, "input_kind", s.input_kind);
    if (j.contains("csv")) {
        const auto& c = j.at("csv");
        io::detail::read(c, "date_column", s.csv.date_column);
        io::detail::read(c, "value_column", s.csv.value_column);
        io::detail::read(c, "date_format", s.csv.date_format);
    }
    if (j.contains("changepoint")) io::apply(j.at("changepoint"), s.changepoint);
    if (j.contains("mfdfa")) io::apply(j.at("mfdfa"), s.mfdfa);
    if (j.contains("forecast")) io::apply(j.at("forecast"), s.forecast);
    if (j.contains("surrogate")) {
        const auto& c = j.at("surrogate");
        io::detail::read(c, "n", s.surrogates);
        if (c.contains("kind")) {
            const auto k = c.at("kind").get<std::string>();
            if (k != "shuffle" && k != "phase") throw InputError("config: unknown surrogate kind '" + k + "'");
            s.surrogate_kind = k == "phase" ? SurrogateKind::phase : SurrogateKind::shuffle;
        }
    }
    if (j.contains("breaks")) {
        const auto& b = j.at("breaks");
        if (b.is_string() && b.get<std::string>() == "auto")
            s.breaks.reset();
        else
            s.breaks = b.get<std::vector<std::size_t>>();
    }
    io::detail::read(j, "fa", s.fa);
}

/// "manual:100,250" -> {100, 250}; "auto" -> empty optional.
inline std::optional<std::vector<std::size_t>> parse_breaks(const std::string& text) {
    if (text == "auto") return std::nullopt;
    const std::string prefix = "manual:";
    if (text.rfind(prefix, 0) != 0)
        throw InputError("--breaks must be 'auto' or 'manual:i,j,...', got '" + text + "'");
    std::vector<std::size_t> out;
    std::stringstream ss(text.substr(prefix.size()));
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        long long v = -1;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || v <= 0) throw InputError("invalid break index '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    std::ofstream open(const std::string& name) {
        fs::create_directories(dir_);
        const auto path = dir_ / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw InputError("cannot write " + path.string());
        files_.push_back(name);
        return os;
    }

    void json_file(const std::string& name, const json& j) {
        auto os = open(name);
        os << j.dump(2) << '\n';
    }

    const std::vector<std::string>& files() const { return files_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

struct Loaded {
    TimeSeries series;
    FluctSeries fluct;  // what change-points and MF-DFA see
};

inline Loaded load_input(const std::string& path, const Settings& s) {
    if (!fs::exists(path)) throw InputError("input file not found: " + path);
    Loaded l{load_csv(path, s.csv), {}};
    if (s.input_kind == "price") {
        l.fluct = to_fluctuations(l.series);
    } else if (s.input_kind == "increments") {
        l.fluct.values.assign(l.series.values().begin(), l.series.values().end());
        l.fluct.timestamps.assign(l.series.timestamps().begin(), l.series.timestamps().end());
        l.fluct.source_label = l.series.label();
        l.fluct.axis = l.series.axis();
    } else {
        throw InputError("unknown input kind '" + s.input_kind + "' (use price or increments)");
    }
    return l;
}

inline void fill_mfdfa_defaults(Settings& s) {
    if (s.mfdfa.q_grid.empty()) s.mfdfa.q_grid = default_q_grid();
}

inline void write_structured(Writer& w, const StructuredReport& r, const FluctSeries& f,
                             const std::string& format) {
    std::vector<const FluctuationSurface*> surfaces;
    std::vector<const HurstCurve*> curves;
    std::vector<const SingularitySpectrum*> spectra;
    for (const auto& seg : r.segments) {
        if (!seg.analysis) continue;
        surfaces.push_back(&seg.analysis->surface);
        curves.push_back(&seg.analysis->curve);
        spectra.push_back(&seg.analysis->spectrum);
    }
    if (format == "csv") {
        auto a = w.open("surface.csv");
        io::write_surface_csv(a, surfaces);
        auto b = w.open("hurst.csv");
        io::write_hurst_csv(b, curves);
        auto c = w.open("spectra.csv");
        io::write_spectrum_csv(c, spectra);
        auto d = w.open("changepoints.csv");
        d << "break,index,timestamp\n";
        for (std::size_t i = 0; i < r.changepoints.breaks.size(); ++i) {
            const auto at = r.changepoints.breaks[i];
            d << i + 1 << ',' << at << ',' << format_timestamp(f.timestamps.at(at), f.axis) << '\n';
        }
    }
}

inline void print_segments(std::ostream& out, const StructuredReport& r) {
    out << std::left << std::setw(18) << "segment" << std::setw(10) << "begin" << std::setw(10)
        << "end" << std::setw(12) << "rho(2)" << std::setw(12) << "delta_alpha" << "status\n";
    for (const auto& seg : r.segments) {
        out << std::setw(18) << seg.label << std::setw(10) << seg.range.begin << std::setw(10)
            << seg.range.end;
        if (seg.analysis) {
            const auto& c = seg.analysis->curve;
            std::string rho2 = "-";
            for (std::size_t i = 0; i < c.q.size(); ++i)
                if (c.q[i] == 2.0) rho2 = io::num(c.rho[i]).substr(0, 8);
            out << std::setw(12) << rho2 << std::setw(12)
                << io::num(seg.analysis->spectrum.delta_alpha).substr(0, 8);
        } else {
            out << std::setw(12) << "-" << std::setw(12) << "-";
        }
        out << to_string(seg.status) << '\n';
    }
}

inline std::vector<std::size_t> dyadic_scales(std::size_t n) {
    std::vector<std::size_t> s;
    for (std::size_t v = 2; v <= n / 16; v *= 2) s.push_back(v);
    return s;
}

struct Context {
    std::string command;
    std::string input;
    std::uint64_t seed = 1;
    std::string format = "csv";
    Settings settings;
    json params = json::object();
};

inline StructuredReport structured(const Context& c, const FluctSeries& f) {
    return s_mfdfa(f, c.settings.changepoint, c.settings.mfdfa, c.settings.breaks);
}

inline void cmd_changepoints(Context& c, Writer& w, std::ostream& out) {
    const auto l = load_input(c.input, c.settings);
    const auto used = c.settings.breaks
                          ? evaluate_breaks(l.fluct.values, *c.settings.breaks, c.settings.changepoint)
                          : detect_multiple(l.fluct.values, c.settings.changepoint);
    const auto& breaks = used.breaks;
    if (c.format == "csv") {
        auto os = w.open("changepoints.csv");
        os << "break,index,timestamp\n";
        for (std::size_t i = 0; i < breaks.size(); ++i)
            os << i + 1 << ',' << breaks[i] << ','
               << format_timestamp(l.fluct.timestamps.at(breaks[i]), l.fluct.axis) << '\n';
        auto seg = w.open("segments.csv");
        seg << "segment,begin,end,cost\n";
        std::size_t begin = 0;
        for (std::size_t i = 0; i <= breaks.size(); ++i) {
            const std::size_t end = i < breaks.size() ? breaks[i] : l.fluct.size();
            seg << l.fluct.source_label << '#' << i + 1 << ',' << begin << ',' << end << ','
                << io::num(used.segment_costs.at(i)) << '\n';
            begin = end;
        }
    } else {
        w.json_file("changepoints.json", io::to_json(used, l.fluct.timestamps, l.fluct.axis));
    }
    out << "change-points: " << breaks.size() << '\n';
    for (auto b : breaks) out << "  " << b << "  " << format_timestamp(l.fluct.timestamps[b], l.fluct.axis) << '\n';
}

inline void cmd_mfdfa(Context& c, Writer& w, std::ostream& out) {
    const auto l = load_input(c.input, c.settings);
    // without --breaks this command analyses the whole series
    const auto breaks = c.settings.breaks.value_or(std::vector<std::size_t>{});
    const auto r = s_mfdfa(l.fluct, c.settings.changepoint, c.settings.mfdfa, breaks);
    for (const auto& seg : r.segments)
        if (seg.status == SegmentStatus::failed) throw NumericalError(seg.label + ": " + seg.message);
        else if (seg.status == SegmentStatus::too_short) throw InputError(seg.label + ": " + seg.message);
    write_structured(w, r, l.fluct, c.format);

    std::optional<PartitionFunction> pf;
    if (c.settings.fa) {
        pf = fa_partition(l.fluct.values, c.settings.mfdfa.q_grid, dyadic_scales(l.fluct.size()));
        if (c.format == "csv") {
            auto os = w.open("partition.csv");
            os << "q,tau_fa,rho_fa\n";
            for (std::size_t i = 0; i < pf->q.size(); ++i)
                os << io::num(pf->q[i]) << ',' << io::num(pf->tau_fa[i]) << ',' << io::num(pf->rho_fa[i]) << '\n';
        }
    }
    if (c.format == "json") {
        json j = io::to_json(r, l.fluct.timestamps, l.fluct.axis);
        json surf = json::array();
        for (const auto& seg : r.segments) surf.push_back(io::to_json(seg.analysis->surface));
        j["surfaces"] = surf;
        if (pf) j["partition"] = io::to_json(*pf);
        w.json_file("mfdfa.json", j);
    }
    print_segments(out, r);
}

inline json surrogate_block(const Context& c, std::span<const double> x, std::ostream& out) {
    const auto cmp = surrogate_test(x, c.settings.surrogate_kind, c.settings.surrogates, c.settings.mfdfa, c.seed);
    out << "surrogates (" << to_string(cmp.kind) << ", n=" << cmp.n_requested << "): original delta_alpha "
        << io::num(cmp.original_delta_alpha).substr(0, 8) << ", quantile " << io::num(cmp.quantile).substr(0, 8)
        << '\n';
    return io::to_json(cmp, c.settings.mfdfa);
}

inline void write_surrogate_csv(Writer& w, const json& j) {
    auto os = w.open("surrogates.csv");
    os << "member,delta_alpha\n";
    os << "original," << io::num(j.at("original_delta_alpha").get<double>()) << '\n';
    std::size_t i = 0;
    for (const auto& v : j.at("surrogate_delta_alphas")) os << ++i << ',' << io::num(v.get<double>()) << '\n';
}

inline void cmd_surrogate(Context& c, Writer& w, std::ostream& out) {
    const auto l = load_input(c.input, c.settings);
    if (c.settings.surrogates == 0) c.settings.surrogates = 20;
    const auto j = surrogate_block(c, l.fluct.values, out);
    if (c.format == "csv")
        write_surrogate_csv(w, j);
    else
        w.json_file("surrogates.json", j);
}

inline void cmd_analyze(Context& c, Writer& w, std::ostream& out) {
    const auto l = load_input(c.input, c.settings);
    const auto stats = describe(l.series.values());
    const auto fstats = describe(l.fluct.values);
    const auto census = outlier_census(l.fluct.values);
    const auto r = structured(c, l.fluct);
    write_structured(w, r, l.fluct, c.format);

    json report{{"label", l.series.label()},
                {"input_kind", c.settings.input_kind},
                {"levels", io::to_json(stats)},
                {"fluctuations", io::to_json(fstats)},
                {"outliers", io::to_json(census)},
                {"structured", io::to_json(r, l.fluct.timestamps, l.fluct.axis)}};
    if (c.settings.surrogates > 0) {
        report["surrogate"] = surrogate_block(c, l.fluct.values, out);
        if (c.format == "csv") write_surrogate_csv(w, report["surrogate"]);
    }
    if (c.format == "csv") {
        auto os = w.open("stats.csv");
        os << "series,n,min,max,mean,std_dev,skewness,excess_kurtosis\n";
        for (const auto& [name, st] : {std::pair{"levels", &stats}, std::pair{"fluctuations", &fstats}})
            os << name << ',' << st->n << ',' << io::num(st->min) << ',' << io::num(st->max) << ','
               << io::num(st->mean) << ',' << io::num(st->std_dev) << ','
               << (st->skewness ? io::num(*st->skewness) : "nan") << ','
               << (st->excess_kurtosis ? io::num(*st->excess_kurtosis) : "nan") << '\n';
    }
    w.json_file("report.json", report);

    out << l.series.label() << ": " << l.series.size() << " observations, " << r.changepoints.breaks.size()
        << " change-points\n";
    print_segments(out, r);
}

inline void cmd_forecast(Context& c, Writer& w, std::ostream& out) {
    const auto l = load_input(c.input, c.settings);
    std::vector<std::size_t> level_breaks;
    if (c.settings.breaks) {
        level_breaks = *c.settings.breaks;
    } else {
        // a fluctuation break h starts at the move into level h + 1
        const auto r = detect_multiple(l.fluct.values, c.settings.changepoint);
        const std::size_t shift = c.settings.input_kind == "price" ? 1 : 0;
        for (auto b : r.breaks) level_breaks.push_back(b + shift);
    }
    split_segments(l.series.values(), level_breaks, 1);
    const auto report = pipeline_compare(l.series, level_breaks, c.settings.forecast);
    if (c.format == "csv") {
        auto a = w.open("forecast.csv");
        io::write_forecast_csv(a, report);
        auto b = w.open("fitted.csv");
        io::write_fitted_csv(b, report);
    } else {
        w.json_file("forecast.json", io::to_json(report));
    }
    out << std::left << std::setw(18) << "segment" << std::setw(10) << "method" << std::setw(12) << "d"
        << std::setw(12) << "MAPE" << "seed\n";
    for (const auto& row : report.rows) {
        out << std::setw(18) << row.label << std::setw(10) << to_string(row.method) << std::setw(12)
            << io::num(row.d_used).substr(0, 8) << std::setw(12)
            << (row.mape ? io::num(*row.mape).substr(0, 8) : std::string("-")) << row.seed;
        if (row.status != "ok") out << "  " << row.status;
        out << '\n';
    }
    out << "LFD-NAR not worse in " << report.summary.lfd_not_worse << " of " << report.summary.compared_pairs
        << " pairs\n";
}

struct SynthParams {
    std::string kind;
    double b1 = 0.75, b2 = 0.25;
    int levels = 14;
    bool shuffle = false;
    double hurst = 0.7;
    std::size_t n = 4096;
    double d = 0.3;
    std::size_t at = 0;
    double shift = 3.0;
    double sigma = 1.0;
    double offset = 0.0;
};

inline void cmd_synth(Context& c, const SynthParams& p, Writer& w, std::ostream& out) {
    std::vector<double> x;
    json params{{"kind", p.kind}};
    if (p.kind == "cascade") {
        x = generate_cascade(p.b1, p.b2, p.levels, p.shuffle ? std::optional<std::uint64_t>(c.seed) : std::nullopt);
        params.update(json{{"b1", p.b1}, {"b2", p.b2}, {"levels", p.levels}, {"shuffle", p.shuffle}});
    } else if (p.kind == "fgn") {
        x = synth::fgn(p.n, p.hurst, c.seed);
        params.update(json{{"hurst", p.hurst}, {"n", p.n}});
    } else if (p.kind == "arfima") {
        x = arfima_generate(p.d, p.n, c.seed);
        params.update(json{{"d", p.d}, {"n", p.n}});
    } else if (p.kind == "step") {
        const std::size_t at = p.at ? p.at : p.n / 2;
        x = synth::step(p.n, at, p.shift, c.seed, p.sigma);
        params.update(json{{"n", p.n}, {"at", at}, {"shift", p.shift}, {"sigma", p.sigma}});
    } else {
        throw InputError("unknown synth kind '" + p.kind + "' (cascade, fgn, arfima, step)");
    }
    if (p.kind != "cascade") {
        for (double& v : x) v += p.offset;
        params["offset"] = p.offset;
    }
    auto os = w.open(p.kind + ".csv");
    io::write_series_csv(os, x, "value");
    c.params = params;
    out << "wrote " << x.size() << " samples to " << (w.dir() / w.files().back()).string() << '\n';
}

/// Runs one command line (program name excluded).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structured multifractal detrended fluctuation analysis", "smfdfa"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    Context c;
    std::string out_dir = ".";
    std::string config_path;
    auto* seed_opt = app.add_option("--seed", c.seed, "Base seed for every random stream");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--config", config_path, "JSON file overriding defaults (a manifest works too)");
    app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));

    std::string input_kind, breaks, date_column, value_column, date_format, surrogate_kind, method;
    std::size_t surrogates = 0, max_breaks = 0, min_segment = 0, order = 0;
    double penalty = 0.0;
    std::vector<double> q_grid;
    bool fa = false;
    std::vector<CLI::Option*> watched;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", c.input, "Input CSV")->required();
        sub->add_option("--input-kind", input_kind, "price (levels) or increments")
            ->check(CLI::IsMember({"price", "increments"}));
        sub->add_option("--date-column", date_column);
        sub->add_option("--value-column", value_column);
        sub->add_option("--date-format", date_format, "strftime format or 'index'");
        sub->add_option("--breaks", breaks, "auto or manual:i,j,...");
    };
    auto add_cp = [&](CLI::App* sub) {
        sub->add_option("--penalty", penalty, "Per-break penalty");
        sub->add_option("--max-breaks", max_breaks);
        sub->add_option("--min-segment", min_segment);
    };
    auto add_mf = [&](CLI::App* sub) {
        sub->add_option("--order", order, "Detrending polynomial order");
        sub->add_option("--q", q_grid, "q values")->delimiter(',');
    };

    auto* analyze = app.add_subcommand("analyze", "Change-points, per-segment MF-DFA and statistics");
    add_input(analyze);
    add_cp(analyze);
    add_mf(analyze);
    analyze->add_option("--surrogates", surrogates, "Surrogate count (0 skips the test)");
    analyze->add_option("--surrogate-kind", surrogate_kind)->check(CLI::IsMember({"shuffle", "phase"}));

    auto* changepoints = app.add_subcommand("changepoints", "Penalized change-point detection");
    add_input(changepoints);
    add_cp(changepoints);

    auto* mfdfa = app.add_subcommand("mfdfa", "MF-DFA of the series or of manual segments");
    add_input(mfdfa);
    add_mf(mfdfa);
    mfdfa->add_flag("--fa", fa, "Also fit the box-probability partition function");

    auto* surrogate = app.add_subcommand("surrogate", "Spectrum width against surrogates");
    add_input(surrogate);
    add_mf(surrogate);
    surrogate->add_option("--n", surrogates, "Surrogate count");
    surrogate->add_option("--kind", surrogate_kind)->check(CLI::IsMember({"shuffle", "phase"}));

    auto* forecast = app.add_subcommand("forecast", "FD-NAR and LFD-NAR comparison");
    add_input(forecast);
    add_cp(forecast);
    forecast->add_option("--method", method)->check(CLI::IsMember({"fd", "lfd", "both"}));

    SynthParams sp;
    auto* synth_cmd = app.add_subcommand("synth", "Synthetic series");
    synth_cmd->add_option("kind", sp.kind, "cascade, fgn, arfima or step")->required();
    synth_cmd->add_option("--b1", sp.b1);
    synth_cmd->add_option("--b2", sp.b2);
    synth_cmd->add_option("--levels", sp.levels);
    synth_cmd->add_flag("--shuffle", sp.shuffle, "Randomize weight order per split");
    synth_cmd->add_option("--hurst", sp.hurst);
    synth_cmd->add_option("--n", sp.n);
    synth_cmd->add_option("--d", sp.d);
    synth_cmd->add_option("--at", sp.at);
    synth_cmd->add_option("--shift", sp.shift);
    synth_cmd->add_option("--sigma", sp.sigma);
    synth_cmd->add_option("--offset", sp.offset, "Constant added to every value");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return ok;
        }
        err << "error: " << e.what() << '\n';
        return input_error;
    }

    const auto* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    auto given = [&](const char* name) {
        const auto* o = sub->get_option_no_throw(name);
        return o && o->count() > 0;
    };

    try {
        Settings& s = c.settings;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw InputError("cannot read config file " + config_path);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw InputError("config file " + config_path + ": " + e.what());
            }
            if (j.contains("command") && j.contains("config")) {  // a run manifest
                if (!seed_opt->count() && j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
                j = j.at("config");
            }
            try {
                apply_config(j, s);
            } catch (const json::exception& e) {
                throw InputError("config file " + config_path + ": " + e.what());
            }
        }
        if (given("--input-kind")) s.input_kind = input_kind;
        if (given("--date-column")) s.csv.date_column = date_column;
        if (given("--value-column")) s.csv.value_column = value_column;
        if (given("--date-format")) s.csv.date_format = date_format;
        if (given("--breaks")) s.breaks = parse_breaks(breaks);
        if (given("--penalty")) s.changepoint.penalty = penalty;
        if (given("--max-breaks")) s.changepoint.max_breaks = max_breaks;
        if (given("--min-segment")) s.changepoint.min_segment = min_segment;
        if (given("--order")) s.mfdfa.order = static_cast<int>(order);
        if (given("--q")) s.mfdfa.q_grid = q_grid;
        if (given("--surrogates") || given("--n")) s.surrogates = surrogates;
        if (given("--surrogate-kind") || given("--kind"))
            s.surrogate_kind = surrogate_kind == "phase" ? SurrogateKind::phase : SurrogateKind::shuffle;
        if (given("--fa")) s.fa = fa;
        if (given("--method")) {
            s.forecast.methods.clear();
            if (method != "lfd") s.forecast.methods.push_back(ForecastMethod::fd);
            if (method != "fd") s.forecast.methods.push_back(ForecastMethod::lfd);
        }
        if (seed_opt->count()) s.forecast.seeds = {c.seed};
        fill_mfdfa_defaults(s);

        Writer w(out_dir);
        if (c.command == "synth")
            cmd_synth(c, sp, w, out);
        else if (c.command == "analyze")
            cmd_analyze(c, w, out);
        else if (c.command == "changepoints")
            cmd_changepoints(c, w, out);
        else if (c.command == "mfdfa")
            cmd_mfdfa(c, w, out);
        else if (c.command == "surrogate")
            cmd_surrogate(c, w, out);
        else
            cmd_forecast(c, w, out);

        json manifest{{"command", c.command},
                      {"input", c.command == "synth" ? json(nullptr) : json(c.input)},
                      {"seed", c.seed},
                      {"format", c.format},
                      {"tool_version", kVersion},
                      {"config", c.command == "synth" ? c.params : snapshot(s)}};
        std::vector<std::string> outputs = w.files();
        outputs.push_back("manifest.json");
        manifest["outputs"] = outputs;
        w.json_file("manifest.json", manifest);
        return ok;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_error;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return numerical_error;
    }
}

}  // namespace smfdfa::cli
