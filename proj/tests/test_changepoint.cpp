#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smfdfa/changepoint.hpp"
#include "smfdfa/synth.hpp"
#include "test_util.hpp"

using namespace smfdfa;
using Catch::Approx;

namespace {

ChangePointConfig config_with(double penalty, std::size_t min_segment,
                              std::optional<std::size_t> max_breaks = {}) {
    ChangePointConfig c;
    c.penalty = penalty;
    c.min_segment = min_segment;
    c.max_breaks = max_breaks;
    return c;
}

std::vector<double> piecewise(const std::vector<std::pair<std::size_t, double>>& pieces, double sigma,
                              std::uint64_t seed) {
    std::vector<double> x;
    for (const auto& [len, level] : pieces)
        for (std::size_t i = 0; i < len; ++i) x.push_back(level);
    const auto e = synth::white_noise(x.size(), seed, sigma);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += e[i];
    return x;
}

}  // namespace

TEST_CASE("segment_cost examples", "[changepoint][cost]") {
    CHECK(segment_cost(std::vector<double>{5, 5, 5, 5}) == 0.0);
    CHECK(segment_cost(std::vector<double>{0, 10}) == 50.0);
    CHECK(segment_cost(std::vector<double>{0, 10}, CostStatistic::mean_only) == 50.0);
    CHECK_THROWS_AS(segment_cost(std::vector<double>{}), InputError);
}

TEST_CASE("segment_cost and the prefix-sum table match direct summation", "[changepoint][cost]") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 400;
        const auto x = testutil::uniform_values(n, rng(), -3.0, 3.0);
        const double ref = oracle::sum_sq_dev(x);
        CHECK(segment_cost(x) == Approx(ref).margin(1e-12));
        const SegmentCostTable table(x);
        CHECK(table.cost(0, n) == Approx(ref).margin(1e-12));
    }
}

TEST_CASE("detect_single examples", "[changepoint][single]") {
    const std::vector<double> x{0, 0, 0, 10, 10, 10};
    const auto r = detect_single(x, config_with(0.0, 2));
    REQUIRE(r.breaks.size() == 1);
    CHECK(r.breaks[0] == 3);  // 1-based h = 4
    CHECK(r.total_cost == 0.0);

    const std::vector<double> flat(20, 1.0);
    CHECK(detect_single(flat, config_with(0.0, 4)).breaks[0] == 4);

    CHECK_THROWS_AS(detect_single(std::vector<double>(7, 0.0), config_with(0.0, 4)), InputError);
}

TEST_CASE("detect_single locates a 3-sigma step against a brute-force scan", "[changepoint][single]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = synth::step(1000, 500, 3.0, seed);
        const auto r = detect_single(x, config_with(0.0, 32));
        // brute-force scan of D(h) with direct summation
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t h = 32; h + 32 <= x.size(); ++h) {
            const double d = oracle::sum_sq_dev(std::span(x).first(h)) + oracle::sum_sq_dev(std::span(x).subspan(h));
            if (d < best - 1e-9) {
                best = d;
                arg = h;
            }
        }
        CHECK(r.breaks[0] == arg);
        CHECK(r.total_cost == Approx(best).epsilon(1e-10));
        CHECK(std::abs(static_cast<long>(r.breaks[0]) - 500L) <= 5);
    }
}

TEST_CASE("detect_multiple on a three-level piecewise series", "[changepoint][multiple]") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto x = piecewise({{100, 0.0}, {100, 5.0}, {100, 0.0}}, 0.5, seed);
        for (auto method : {ChangePointMethod::exact_dp, ChangePointMethod::binary_segmentation}) {
            auto cfg = config_with(10.0, 10);
            cfg.method = method;
            const auto r = detect_multiple(x, cfg);
            REQUIRE(r.breaks.size() == 2);
            CHECK(std::abs(static_cast<long>(r.breaks[0]) - 100L) <= 5);
            CHECK(std::abs(static_cast<long>(r.breaks[1]) - 200L) <= 5);
            double sum = 0.0;
            for (double c : r.segment_costs) sum += c;
            CHECK(r.total_cost == Approx(sum + 10.0 * 2).epsilon(1e-12));
        }
    }
}

TEST_CASE("a dominating penalty suppresses every break", "[changepoint][multiple]") {
    const auto x = piecewise({{100, 0.0}, {100, 5.0}}, 0.5, 1);
    CHECK(detect_multiple(x, config_with(1e300, 10)).breaks.empty());
    CHECK(detect_multiple(x, config_with(std::numeric_limits<double>::infinity(), 10)).breaks.empty());
}

TEST_CASE("default penalty keeps i.i.d. noise unsegmented", "[changepoint][multiple]") {
    int clean = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = synth::white_noise(1000, seed);
        ChangePointConfig cfg;
        const auto r = detect_multiple(x, cfg);
        CHECK(r.config_used.penalty);
        if (r.breaks.empty()) ++clean;
    }
    CHECK(clean >= 9);
}

TEST_CASE("exact DP equals exhaustive enumeration", "[changepoint][oracle]") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 20 + rng() % 60;
        const std::size_t hmax = 1 + rng() % 3;
        const std::size_t ms = 2 + rng() % 5;
        auto x = testutil::uniform_values(n, rng(), -1.0, 1.0);
        for (std::size_t i = n / 2; i < n; ++i) x[i] += 1.5 * static_cast<double>(trial % 2);
        const double theta = static_cast<double>(rng() % 4) * 0.5;
        const auto r = detect_multiple(x, config_with(theta, ms, hmax));
        const auto ref = oracle::enumerate_breaks(SegmentCostTable(x), hmax, ms, theta);
        CHECK(r.total_cost == ref.cost);
        CHECK(r.breaks == ref.breaks);
    }
}

TEST_CASE("pruned DP returns the unpruned optimum", "[changepoint][pruning]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = piecewise({{80, 0.0}, {50, 2.0}, {120, -1.0}, {60, 1.0}}, 1.0, seed);
        for (double theta : {0.0, 2.0, 8.0, 30.0}) {
            auto a = config_with(theta, 8);
            auto b = a;
            b.prune = true;
            const auto ra = detect_multiple(x, a);
            const auto rb = detect_multiple(x, b);
            CHECK(ra.breaks == rb.breaks);
            CHECK(ra.total_cost == rb.total_cost);
        }
    }
}

TEST_CASE("uncapped and generously capped DP agree", "[changepoint]") {
    const auto x = piecewise({{60, 0.0}, {60, 3.0}, {60, 0.0}}, 1.0, 4);
    const auto a = detect_multiple(x, config_with(6.0, 5));
    const auto b = detect_multiple(x, config_with(6.0, 5, 30));
    CHECK(a.breaks == b.breaks);
    CHECK(a.total_cost == Approx(b.total_cost).epsilon(1e-14));
}

TEST_CASE("unpenalized optimum is non-increasing in allowed breaks", "[changepoint][property]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = testutil::uniform_values(150, seed);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t h = 0; h <= 6; ++h) {
            const auto r = detect_multiple(x, config_with(0.0, 5, h));
            CHECK(r.total_cost <= prev);
            prev = r.total_cost;
        }
    }
}

TEST_CASE("raising the penalty never adds breaks", "[changepoint][property]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = piecewise({{50, 0.0}, {40, 1.0}, {70, -0.5}, {40, 0.7}}, 1.0, seed);
        std::size_t prev = std::numeric_limits<std::size_t>::max();
        for (double theta : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
            const auto r = detect_multiple(x, config_with(theta, 5));
            CHECK(r.breaks.size() <= prev);
            prev = r.breaks.size();
        }
    }
}

TEST_CASE("translation and scaling", "[changepoint][property]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = piecewise({{60, 0.0}, {60, 2.0}, {60, -1.0}}, 1.0, seed);
        const auto base = detect_multiple(x, config_with(5.0, 8));

        std::vector<double> shifted(x), scaled(x);
        for (auto& v : shifted) v += 123.0;
        for (auto& v : scaled) v *= 4.0;  // c = 4, penalty scaled by 16
        CHECK(detect_multiple(shifted, config_with(5.0, 8)).breaks == base.breaks);
        const auto s = detect_multiple(scaled, config_with(5.0 * 16.0, 8));
        CHECK(s.breaks == base.breaks);
        for (std::size_t i = 0; i < s.segment_costs.size(); ++i)
            CHECK(s.segment_costs[i] == Approx(16.0 * base.segment_costs[i]).epsilon(1e-9));
    }
}

TEST_CASE("detect_single agrees with a one-break unpenalized DP", "[changepoint][property]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto x = testutil::uniform_values(120, seed);
        const auto a = detect_single(x, config_with(0.0, 6));
        const auto b = detect_multiple(x, config_with(0.0, 6, 1));
        REQUIRE(b.breaks.size() == 1);
        CHECK(a.breaks == b.breaks);
    }
}

TEST_CASE("detect_multiple guards", "[changepoint]") {
    const auto x = testutil::uniform_values(50, 1);
    CHECK_THROWS_AS(detect_multiple(x, config_with(-1.0, 5)), InputError);
    CHECK_THROWS_AS(detect_multiple(x, config_with(1.0, 20, 3)), InputError);
    CHECK_THROWS_AS(detect_multiple(x, config_with(1.0, 1)), InputError);
}
