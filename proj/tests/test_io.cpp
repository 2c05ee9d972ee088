#include <catch_amalgamated.hpp>

#include <sstream>

#include "smfdfa/io.hpp"
#include "smfdfa/synth.hpp"

using namespace smfdfa;
using io::json;

TEST_CASE("num round-trips doubles", "[io]") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125}) CHECK(std::stod(io::num(v)) == v);
    CHECK(io::num(std::nan("")) == "nan");
    CHECK(io::num(1.0) == "1");
}

TEST_CASE("series CSV layout", "[io][csv]") {
    std::ostringstream os;
    io::write_series_csv(os, std::vector<double>{0.5, 2.0}, "mass");
    CHECK(os.str() == "index,mass\n0,0.5\n1,2\n");
}

TEST_CASE("surface CSV is long format", "[io][csv]") {
    MfdfaConfig c;
    c.q_grid = {-1.0, 2.0};
    c.scale_grid = {16, 32, 64, 128};
    const auto surf = fluctuation_surface(synth::white_noise(1024, 1), c, "seg#1");
    std::ostringstream os;
    io::write_surface_csv(os, {&surf});
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "segment,q,s,value");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("seg#1,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 8);
}

TEST_CASE("forecast CSV columns", "[io][csv]") {
    ForecastReport r;
    ForecastRow a;
    a.label = "x#1";
    a.method = ForecastMethod::lfd;
    a.d_used = 0.25;
    a.mape = 1.5;
    a.seed = 3;
    r.rows.push_back(a);
    a.mape.reset();
    r.rows.push_back(a);
    std::ostringstream os;
    io::write_forecast_csv(os, r);
    CHECK(os.str() == "segment,method,d_used,mape,seed\nx#1,LFD-NAR,0.25,1.5,3\nx#1,LFD-NAR,0.25,nan,3\n");
}

TEST_CASE("config application", "[io][config]") {
    const auto j = json::parse(R"({
        "changepoint": {"penalty": 4.5, "max_breaks": 3, "min_segment": 40, "method": "binary-segmentation"},
        "mfdfa": {"q_grid": [-2, 0, 2], "order": 2, "regression_range": [16, 256]},
        "forecast": {"lags": 4, "hidden": 8, "seeds": [1, 2, 3], "methods": ["lfd"], "score_scale": "differenced"}
    })");
    ChangePointConfig cp;
    io::apply(j.at("changepoint"), cp);
    CHECK(*cp.penalty == 4.5);
    CHECK(*cp.max_breaks == 3);
    CHECK(cp.min_segment == 40);
    CHECK(cp.method == ChangePointMethod::binary_segmentation);

    MfdfaConfig mf;
    io::apply(j.at("mfdfa"), mf);
    CHECK(mf.q_grid == std::vector<double>{-2, 0, 2});
    CHECK(mf.order == 2);
    CHECK(mf.regression_range == std::make_pair<std::size_t, std::size_t>(16, 256));

    PipelineConfig pc;
    io::apply(j.at("forecast"), pc);
    CHECK(pc.nar.lags == 4);
    CHECK(pc.nar.hidden == 8);
    CHECK(pc.seeds == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(pc.methods == std::vector<ForecastMethod>{ForecastMethod::lfd});
    CHECK(pc.scale == ScoreScale::differenced);

    ChangePointConfig bad;
    CHECK_THROWS_AS(io::apply(json::parse(R"({"method": "magic"})"), bad), InputError);
}

TEST_CASE("config snapshots round-trip", "[io][config]") {
    ChangePointConfig cp;
    cp.penalty = 2.0;
    cp.max_breaks = 5;
    ChangePointConfig back;
    io::apply(io::to_json(cp), back);
    CHECK(io::to_json(back) == io::to_json(cp));

    PipelineConfig pc;
    pc.seeds = {4, 5};
    pc.holdout_fraction = 0.25;
    PipelineConfig pback;
    io::apply(io::to_json(pc), pback);
    CHECK(io::to_json(pback) == io::to_json(pc));

    MfdfaConfig mf;
    mf.q_grid = default_q_grid();
    mf.scale_grid = {16, 32, 64, 128};
    MfdfaConfig mback;
    io::apply(io::to_json(mf), mback);
    CHECK(io::to_json(mback) == io::to_json(mf));
}
