#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "smfdfa/fft.hpp"
#include "smfdfa/surrogate.hpp"
#include "smfdfa/synth.hpp"
#include "test_util.hpp"

using namespace smfdfa;
using Catch::Approx;

namespace {

MfdfaConfig default_config() {
    MfdfaConfig c;
    c.q_grid = default_q_grid();
    return c;
}

}  // namespace

TEST_CASE("shuffle preserves the multiset", "[surrogate][invariant]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto x = synth::student_t(500 + seed, 3.0, seed);
        auto s = shuffle(x, seed * 31);
        CHECK(s != x);
        auto a = x;
        std::sort(a.begin(), a.end());
        std::sort(s.begin(), s.end());
        CHECK(a == s);
    }
    CHECK(shuffle(std::vector<double>{1, 2, 3, 4, 5}, 9) == shuffle(std::vector<double>{1, 2, 3, 4, 5}, 9));
    CHECK_THROWS_AS(shuffle(std::vector<double>{1}, 1), InputError);
}

TEST_CASE("shuffle positions are close to uniform", "[surrogate]") {
    // each of 4 values lands in each slot with probability 1/4
    std::vector<std::vector<int>> counts(4, std::vector<int>(4, 0));
    const std::vector<double> x{0, 1, 2, 3};
    for (std::uint64_t seed = 0; seed < 4000; ++seed) {
        const auto s = shuffle(x, seed);
        for (std::size_t i = 0; i < 4; ++i) ++counts[static_cast<std::size_t>(s[i])][i];
    }
    for (const auto& row : counts)
        for (int c : row) CHECK(std::abs(c - 1000) < 120);
}

TEST_CASE("phase surrogate keeps the periodogram", "[surrogate][invariant]") {
    for (std::size_t n : {256u, 257u, 1000u}) {
        const auto x = synth::ar1(n, 0.6, n);
        const auto s = phase_surrogate(x, 5);
        REQUIRE(s.size() == n);
        const auto a = fft::periodogram(x);
        const auto b = fft::periodogram(s);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(b[j] == Approx(a[j]).epsilon(1e-9).margin(1e-12));
        double mx = 0.0, ms = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += x[i];
            ms += s[i];
        }
        CHECK(ms == Approx(mx).margin(1e-9));
        CHECK(s != x);
    }
    CHECK_THROWS_AS(phase_surrogate(std::vector<double>(10, 1.0), 1), InputError);
}

TEST_CASE("FFT periodogram matches the direct DFT", "[surrogate][oracle]") {
    const auto x = synth::white_noise(300, 4);
    const auto fast = fft::periodogram(x);
    const auto slow = oracle::dft_periodogram(x, 150);
    for (std::size_t j = 0; j <= 150; ++j) CHECK(fast[j] == Approx(slow[j]).epsilon(1e-9).margin(1e-14));
}

TEST_CASE("phase surrogate preserves autocovariance", "[surrogate]") {
    const auto x = synth::ar1(2048, 0.8, 2);
    const auto s = phase_surrogate(x, 6);
    // circular autocovariance is preserved exactly; the linear one nearly so
    for (std::size_t k : {1u, 2u, 5u}) CHECK(oracle::autocovariance(s, k) == Approx(oracle::autocovariance(x, k)).margin(0.25));
}

TEST_CASE("ensembles are reproducible and distinct", "[surrogate]") {
    const auto x = synth::white_noise(128, 1);
    const auto a = make_ensemble(x, SurrogateKind::shuffle, 5, 42);
    const auto b = make_ensemble(x, SurrogateKind::shuffle, 5, 42);
    CHECK(a.series == b.series);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.series[i] != a.series[0]);
    CHECK(make_ensemble(x, SurrogateKind::shuffle, 5, 43).series != a.series);
}

TEST_CASE("surrogate_test on a cascade ranks the original on top", "[surrogate]") {
    const auto casc = generate_cascade(0.75, 0.25, 13);
    const auto c = surrogate_test(casc, SurrogateKind::shuffle, 20, default_config(), 3);
    CHECK(c.surrogate_delta_alphas.size() + c.n_failed == 20);
    CHECK(c.original_delta_alpha > c.surrogate_percentile(0.9));
    CHECK(c.quantile > 0.9);
}

TEST_CASE("surrogate_test quantile definition", "[surrogate]") {
    const auto x = synth::white_noise(2048, 12);
    const auto c = surrogate_test(x, SurrogateKind::phase, 10, default_config(), 1);
    std::size_t below = 0;
    for (double v : c.surrogate_delta_alphas) below += v < c.original_delta_alpha;
    CHECK(c.quantile == static_cast<double>(below + 1) / static_cast<double>(c.surrogate_delta_alphas.size() + 1));
    CHECK_THROWS_AS(surrogate_test(x, SurrogateKind::phase, 9, default_config(), 1), InputError);
}
