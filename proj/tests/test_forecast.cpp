#include <catch_amalgamated.hpp>

#include <cmath>

#include "smfdfa/forecast.hpp"
#include "smfdfa/synth.hpp"
#include "test_util.hpp"

using namespace smfdfa;
using Catch::Approx;

namespace {

std::vector<double> noiseless_ar(std::size_t n, double phi, double level, double start) {
    std::vector<double> x(n);
    double dev = start;
    for (auto& v : x) {
        v = level + dev;
        dev *= phi;
    }
    return x;
}

NarConfig small_net(std::size_t iters = 60) {
    NarConfig c;
    c.lags = 3;
    c.hidden = 6;
    c.trainer.max_iterations = iters;
    return c;
}

}  // namespace

TEST_CASE("MAPE hand cases", "[forecast][mape]") {
    CHECK(mape(std::vector<double>{100, 200}, std::vector<double>{110, 180}) == 10.0);
    CHECK(mape(std::vector<double>{4}, std::vector<double>{4}) == 0.0);
    CHECK(mape(std::vector<double>{-50, 50}, std::vector<double>{-25, 75}) == 50.0);
    try {
        (void)mape(std::vector<double>{1, 0, 2}, std::vector<double>{1, 1, 2});
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
    CHECK_THROWS_AS(mape(std::vector<double>{1, 2}, std::vector<double>{1}), InputError);
}

TEST_CASE("MAPE is scale invariant", "[forecast][mape]") {
    const auto a = testutil::uniform_values(50, 1, 1.0, 5.0);
    const auto f = testutil::uniform_values(50, 2, 1.0, 5.0);
    std::vector<double> a2(a), f2(f);
    for (auto& v : a2) v *= 7.5;
    for (auto& v : f2) v *= 7.5;
    CHECK(mape(a2, f2) == Approx(mape(a, f)).epsilon(1e-12));
}

TEST_CASE("NAR fits a noiseless AR(1) path", "[forecast][nar]") {
    const auto x = noiseless_ar(300, 0.9, 100.0, 10.0);
    NarConfig c;
    c.trainer.max_iterations = 200;
    const auto model = train_nar(x, c, 1);
    CHECK(reconstruct(model, x).mape < 1.0);
}

TEST_CASE("training is deterministic in the seed", "[forecast][nar]") {
    const auto x = synth::ar1(200, 0.5, 3);
    const auto a = train_nar(x, small_net(), 9);
    const auto b = train_nar(x, small_net(), 9);
    CHECK(a.parameters() == b.parameters());
    CHECK(a.loss_trace == b.loss_trace);
    const auto c = train_nar(x, small_net(), 10);
    CHECK(a.parameters() != c.parameters());
}

TEST_CASE("loss trace never increases", "[forecast][nar]") {
    const auto x = synth::ar1(300, 0.7, 4);
    const auto m = train_nar(x, small_net(100), 2);
    REQUIRE(m.loss_trace.size() >= 2);
    for (std::size_t i = 1; i < m.loss_trace.size(); ++i) CHECK(m.loss_trace[i] <= m.loss_trace[i - 1]);
    CHECK(m.loss_trace.size() == m.iterations + 1);
}

TEST_CASE("analytic Jacobian matches finite differences", "[forecast][nar]") {
    const auto x = synth::ar1(80, 0.4, 5);
    NarConfig c = small_net(0);
    auto m = train_nar(x, c, 3);
    const auto design = detail::lag_design(x, c.lags, m.scale_mean(), m.scale_std(), x.size());
    Eigen::MatrixXd jac;
    const Eigen::VectorXd r0 = detail::nar_residuals(m, design, &jac);
    for (Eigen::Index k = 0; k < m.parameters().size(); ++k) {
        const double h = 1e-6;
        m.parameters()[k] += h;
        const Eigen::VectorXd rp = detail::nar_residuals(m, design, nullptr);
        m.parameters()[k] -= 2 * h;
        const Eigen::VectorXd rm = detail::nar_residuals(m, design, nullptr);
        m.parameters()[k] += h;
        const Eigen::VectorXd fd = (rp - rm) / (2 * h);
        CHECK((fd - jac.col(k)).cwiseAbs().maxCoeff() < 1e-6);
    }
    (void)r0;
}

TEST_CASE("training guards", "[forecast][nar]") {
    CHECK_THROWS_AS(train_nar(synth::white_noise(40, 1), NarConfig{}, 1), InputError);
    auto x = synth::white_noise(100, 1);
    x[30] = std::nan("");
    CHECK_THROWS_AS(train_nar(x, small_net(), 1), InputError);
}

TEST_CASE("predictions use only past values", "[forecast][nar]") {
    const auto x = synth::ar1(200, 0.6, 8);
    const auto m = train_nar(x, small_net(), 4);
    auto y = x;
    for (std::size_t i = 150; i < y.size(); ++i) y[i] += 50.0;
    const auto rx = reconstruct(m, x, false);
    const auto ry = reconstruct(m, y, false);
    // fitted[i] forecasts index i + lags from indices i .. i + lags - 1
    for (std::size_t i = 0; i + m.lags() <= 150; ++i) CHECK(rx.fitted[i] == ry.fitted[i]);
    CHECK(rx.fitted[150] != ry.fitted[150]);
}

TEST_CASE("pipeline without breaks gives FD equal to LFD", "[forecast][pipeline]") {
    auto x = arfima_generate(0.3, 600, 2);
    for (double& v : x) v += 50.0;
    PipelineConfig c;
    c.nar = small_net(30);
    const auto r = pipeline_compare(x, {}, c, "x");
    REQUIRE(r.rows.size() == 2);
    REQUIRE(r.rows[0].mape);
    REQUIRE(r.rows[1].mape);
    CHECK(r.rows[0].method == ForecastMethod::fd);
    CHECK(r.rows[1].method == ForecastMethod::lfd);
    CHECK(*r.rows[0].mape == *r.rows[1].mape);
    CHECK(r.rows[0].d_used == r.rows[1].d_used);
    CHECK(r.summary.compared_pairs == 1);
    CHECK(r.summary.lfd_not_worse == 1);
}

TEST_CASE("pipeline rows per segment and seed", "[forecast][pipeline]") {
    auto a = arfima_generate(0.1, 700, 3);
    const auto b = arfima_generate(0.4, 700, 4);
    a.insert(a.end(), b.begin(), b.end());
    for (double& v : a) v += 40.0;
    PipelineConfig c;
    c.nar = small_net(20);
    c.seeds = {1, 2};
    const auto r = pipeline_compare(a, {700}, c, "ab");
    CHECK(r.rows.size() == 2 * 2 * 2);
    for (const auto& row : r.rows) {
        CHECK(row.status == "ok");
        CHECK(row.actual.size() == row.fitted.size());
        CHECK(row.first_index >= row.segment * 700);
    }
    // rows for the same segment score the same dates
    for (const auto& x : r.rows)
        for (const auto& y : r.rows)
            if (x.segment == y.segment) CHECK(x.first_index == y.first_index);
    CHECK(r.summary.compared_pairs == 4);

    c.scale = ScoreScale::differenced;
    c.holdout_fraction = 0.2;
    c.seeds = {1};
    const auto h = pipeline_compare(a, {700}, c, "ab");
    for (const auto& row : h.rows) CHECK(row.status == "ok");
}

TEST_CASE("short segments are reported, not fatal", "[forecast][pipeline]") {
    auto x = arfima_generate(0.2, 1200, 5);
    for (double& v : x) v += 30.0;
    PipelineConfig c;
    c.nar = small_net(10);
    const auto r = pipeline_compare(x, {100}, c, "s");
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].status.rfind("too short", 0) == 0);
    CHECK(!r.rows[0].mape);
    CHECK(r.rows[2].mape);
}
