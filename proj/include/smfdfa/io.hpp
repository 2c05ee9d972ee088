#pragma once

// JSON and long-format CSV serialization of every report type, and JSON
// parsing of run configurations.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "smfdfa/changepoint.hpp"
#include "smfdfa/forecast.hpp"
#include "smfdfa/longmemory.hpp"
#include "smfdfa/mfdfa.hpp"
#include "smfdfa/series.hpp"
#include "smfdfa/structured.hpp"
#include "smfdfa/surrogate.hpp"

namespace smfdfa::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; non-finite values print as "nan".
inline std::string num(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

// ---------------------------------------------------------------------------
// Reports to JSON
// ---------------------------------------------------------------------------

inline json to_json(const DescriptiveStats& s) {
    return json{{"n", s.n},
                {"min", s.min},
                {"max", s.max},
                {"mean", s.mean},
                {"std_dev", s.std_dev},
                {"coef_variation_pct", opt(s.coef_variation)},
                {"skewness", opt(s.skewness)},
                {"excess_kurtosis", opt(s.excess_kurtosis)},
                {"jarque_bera", opt(s.jarque_bera_stat)}};
}

inline json to_json(const OutlierCensus& c) {
    return json{{"q1", c.q1},
                {"q3", c.q3},
                {"iqr", c.iqr},
                {"low_mild", c.low_mild},
                {"high_mild", c.high_mild},
                {"low_extreme", c.low_extreme},
                {"high_extreme", c.high_extreme}};
}

inline json to_json(const ChangePointConfig& c) {
    return json{{"statistic", to_string(c.statistic)},
                {"penalty", opt(c.penalty)},
                {"max_breaks", opt(c.max_breaks)},
                {"min_segment", c.min_segment},
                {"method", to_string(c.method)},
                {"prune", c.prune}};
}

/// `stamps` maps break indices to timestamps (may be empty).
inline json to_json(const ChangePointResult& r, std::span<const std::int64_t> stamps = {},
                    TimeAxis axis = TimeAxis::index) {
    json breaks = json::array();
    for (auto b : r.breaks) {
        json entry{{"index", b}};
        if (b < stamps.size()) entry["timestamp"] = format_timestamp(stamps[b], axis);
        breaks.push_back(entry);
    }
    return json{{"breaks", breaks},
                {"total_cost", r.total_cost},
                {"segment_costs", r.segment_costs},
                {"config", to_json(r.config_used)}};
}

inline json to_json(const MfdfaConfig& c) {
    json j{{"q_grid", c.q_grid}, {"scale_grid", c.scale_grid}, {"order", c.order}};
    if (c.regression_range)
        j["regression_range"] = {c.regression_range->first, c.regression_range->second};
    else
        j["regression_range"] = nullptr;
    return j;
}

inline json to_json(const HurstCurve& c) {
    return json{{"label", c.label},
                {"q", c.q},
                {"rho", c.rho},
                {"std_error", c.std_error},
                {"r2", c.r2}};
}

inline json to_json(const SingularitySpectrum& s) {
    return json{{"label", s.label},      {"q", s.q},
                {"tau", s.tau},          {"alpha", s.alpha},
                {"f", s.f},              {"delta_alpha", s.delta_alpha},
                {"alpha_monotone", s.alpha_monotone}};
}

inline json to_json(const FluctuationSurface& s) {
    return json{{"label", s.label},
                {"length", s.length},
                {"q", s.q},
                {"scales", s.scales},
                {"n_windows", s.n_windows},
                {"phi", s.phi},
                {"config", to_json(s.config)}};
}

inline json to_json(const PartitionFunction& p) {
    json rho = json::array();
    for (double v : p.rho_fa) rho.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    return json{{"q", p.q}, {"scales", p.scales}, {"z", p.z}, {"tau_fa", p.tau_fa}, {"rho_fa", rho}};
}

inline json to_json(const StructuredReport& r, std::span<const std::int64_t> stamps = {},
                    TimeAxis axis = TimeAxis::index) {
    json segs = json::array();
    for (const auto& s : r.segments) {
        json j{{"index", s.index},
               {"label", s.label},
               {"begin", s.range.begin},
               {"end", s.range.end},
               {"status", to_string(s.status)}};
        if (!stamps.empty()) {
            j["first_timestamp"] = format_timestamp(stamps[s.range.begin], axis);
            j["last_timestamp"] = format_timestamp(stamps[s.range.end - 1], axis);
        }
        if (!s.message.empty()) j["message"] = s.message;
        if (s.analysis) {
            j["hurst"] = to_json(s.analysis->curve);
            j["spectrum"] = to_json(s.analysis->spectrum);
        }
        segs.push_back(j);
    }
    return json{{"label", r.label},
                {"changepoints", to_json(r.changepoints, stamps, axis)},
                {"segments", segs}};
}

inline json to_json(const SurrogateComparison& c, const MfdfaConfig& config) {
    return json{{"kind", to_string(c.kind)},
                {"seed", c.seed},
                {"n_requested", c.n_requested},
                {"n_failed", c.n_failed},
                {"original_delta_alpha", c.original_delta_alpha},
                {"surrogate_delta_alphas", c.surrogate_delta_alphas},
                {"quantile", c.quantile},
                {"config", to_json(config)}};
}

inline json to_json(const LongMemoryEstimate& e) {
    return json{{"method", e.method},
                {"d_hat", e.d_hat},
                {"std_error", e.std_error},
                {"ols_std_error", e.ols_std_error},
                {"bandwidth", e.bandwidth}};
}

inline json to_json(const PipelineConfig& c) {
    json methods = json::array();
    for (auto m : c.methods) methods.push_back(m == ForecastMethod::fd ? "fd" : "lfd");
    return json{{"lags", c.nar.lags},
                {"hidden", c.nar.hidden},
                {"lambda_init", c.nar.trainer.lambda_init},
                {"lambda_factor", c.nar.trainer.lambda_factor},
                {"lambda_max", c.nar.trainer.lambda_max},
                {"max_iterations", c.nar.trainer.max_iterations},
                {"seeds", c.seeds},
                {"methods", methods},
                {"score_scale", to_string(c.scale)},
                {"holdout_fraction", c.holdout_fraction},
                {"gph_bandwidth", opt(c.gph_bandwidth)}};
}

inline json to_json(const ForecastReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back(json{{"segment", row.label},
                            {"method", to_string(row.method)},
                            {"d_used", row.d_used},
                            {"mape", opt(row.mape)},
                            {"seed", row.seed},
                            {"status", row.status}});
    }
    return json{{"label", r.label},
                {"breaks", r.breaks},
                {"rows", rows},
                {"summary",
                 {{"mean_mape_fd", r.summary.mean_mape_fd},
                  {"mean_mape_lfd", r.summary.mean_mape_lfd},
                  {"compared_pairs", r.summary.compared_pairs},
                  {"lfd_not_worse", r.summary.lfd_not_worse}}},
                {"config", to_json(r.config)}};
}

// ---------------------------------------------------------------------------
// Long-format CSV
// ---------------------------------------------------------------------------

inline void write_surface_csv(std::ostream& os, const std::vector<const FluctuationSurface*>& surfaces) {
    os << "segment,q,s,value\n";
    for (const auto* s : surfaces)
        for (std::size_t iq = 0; iq < s->q.size(); ++iq)
            for (std::size_t is = 0; is < s->scales.size(); ++is)
                os << s->label << ',' << num(s->q[iq]) << ',' << s->scales[is] << ','
                   << num(s->phi[iq][is]) << '\n';
}

inline void write_hurst_csv(std::ostream& os, const std::vector<const HurstCurve*>& curves) {
    os << "segment,q,rho,std_error,r2\n";
    for (const auto* c : curves)
        for (std::size_t i = 0; i < c->q.size(); ++i)
            os << c->label << ',' << num(c->q[i]) << ',' << num(c->rho[i]) << ','
               << num(c->std_error[i]) << ',' << num(c->r2[i]) << '\n';
}

inline void write_spectrum_csv(std::ostream& os, const std::vector<const SingularitySpectrum*>& spectra) {
    os << "segment,q,tau,alpha,f,delta_alpha\n";
    for (const auto* s : spectra)
        for (std::size_t i = 0; i < s->q.size(); ++i)
            os << s->label << ',' << num(s->q[i]) << ',' << num(s->tau[i]) << ',' << num(s->alpha[i])
               << ',' << num(s->f[i]) << ',' << num(s->delta_alpha) << '\n';
}

inline void write_forecast_csv(std::ostream& os, const ForecastReport& r) {
    os << "segment,method,d_used,mape,seed\n";
    for (const auto& row : r.rows)
        os << row.label << ',' << to_string(row.method) << ',' << num(row.d_used) << ','
           << (row.mape ? num(*row.mape) : std::string("nan")) << ',' << row.seed << '\n';
}

inline void write_fitted_csv(std::ostream& os, const ForecastReport& r) {
    os << "segment,method,seed,index,actual,fitted\n";
    for (const auto& row : r.rows)
        for (std::size_t i = 0; i < row.fitted.size(); ++i)
            os << row.label << ',' << to_string(row.method) << ',' << row.seed << ','
               << row.first_index + i << ',' << num(row.actual[i]) << ',' << num(row.fitted[i]) << '\n';
}

inline void write_series_csv(std::ostream& os, std::span<const double> values,
                             const std::string& column = "value") {
    os << "index," << column << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << num(values[i]) << '\n';
}

// ---------------------------------------------------------------------------
// Configuration parsing
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null())
        out.reset();
    else
        out = j.at(key).get<T>();
}

}  // namespace detail

inline void apply(const json& j, ChangePointConfig& c) {
    detail::read(j, "penalty", c.penalty);
    detail::read(j, "max_breaks", c.max_breaks);
    detail::read(j, "min_segment", c.min_segment);
    detail::read(j, "prune", c.prune);
    if (j.contains("statistic")) {
        const auto s = j.at("statistic").get<std::string>();
        if (s == "mean-only")
            c.statistic = CostStatistic::mean_only;
        else if (s == "mean-and-variance")
            c.statistic = CostStatistic::mean_and_variance;
        else
            throw InputError("config: unknown change-point statistic '" + s + "'");
    }
    if (j.contains("method")) {
        const auto m = j.at("method").get<std::string>();
        if (m == "exact-dp")
            c.method = ChangePointMethod::exact_dp;
        else if (m == "binary-segmentation")
            c.method = ChangePointMethod::binary_segmentation;
        else
            throw InputError("config: unknown change-point method '" + m + "'");
    }
}

inline void apply(const json& j, MfdfaConfig& c) {
    detail::read(j, "q_grid", c.q_grid);
    detail::read(j, "scale_grid", c.scale_grid);
    detail::read(j, "order", c.order);
    if (j.contains("regression_range")) {
        const auto& r = j.at("regression_range");
        if (r.is_null())
            c.regression_range.reset();
        else
            c.regression_range = std::make_pair(r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>());
    }
}

inline void apply(const json& j, PipelineConfig& c) {
    detail::read(j, "lags", c.nar.lags);
    detail::read(j, "hidden", c.nar.hidden);
    detail::read(j, "lambda_init", c.nar.trainer.lambda_init);
    detail::read(j, "lambda_factor", c.nar.trainer.lambda_factor);
    detail::read(j, "lambda_max", c.nar.trainer.lambda_max);
    detail::read(j, "max_iterations", c.nar.trainer.max_iterations);
    detail::read(j, "seeds", c.seeds);
    detail::read(j, "holdout_fraction", c.holdout_fraction);
    detail::read(j, "gph_bandwidth", c.gph_bandwidth);
    if (j.contains("score_scale")) {
        const auto s = j.at("score_scale").get<std::string>();
        if (s == "level")
            c.scale = ScoreScale::level;
        else if (s == "differenced")
            c.scale = ScoreScale::differenced;
        else
            throw InputError("config: unknown score scale '" + s + "'");
    }
    if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& m : j.at("methods")) {
            const auto s = m.get<std::string>();
            if (s == "fd")
                c.methods.push_back(ForecastMethod::fd);
            else if (s == "lfd")
                c.methods.push_back(ForecastMethod::lfd);
            else
                throw InputError("config: unknown forecast method '" + s + "'");
        }
    }
}

}  // namespace smfdfa::io
