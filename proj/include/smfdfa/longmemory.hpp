#pragma once

// Long-memory estimation (GPH log-periodogram regression, DFA Hurst) and
// truncated fractional differencing with binomial weights of (1 - B)^d.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "smfdfa/error.hpp"
#include "smfdfa/fft.hpp"
#include "smfdfa/mfdfa.hpp"
#include "smfdfa/regression.hpp"

namespace smfdfa {

struct LongMemoryEstimate {
    double d_hat = 0.0;
    /// Asymptotic standard error pi / sqrt(24 m).
    double std_error = 0.0;
    /// Residual-based OLS standard error of the slope.
    double ols_std_error = 0.0;
    std::size_t bandwidth = 0;
    std::string method = "gph";
};

/// Regresses log I(lambda_j) on -2 log(2 sin(lambda_j / 2)) over the first
/// `bandwidth` Fourier frequencies (default floor(sqrt(N))).
inline LongMemoryEstimate gph_estimate(std::span<const double> x,
                                       std::optional<std::size_t> bandwidth = {}) {
    detail::require(x.size() >= 128, "gph_estimate: need at least 128 observations");
    const std::size_t n = x.size();
    const std::size_t m =
        bandwidth.value_or(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
    detail::require(m >= 4 && m <= n / 2, "gph_estimate: bandwidth must lie in [4, N/2]");

    const auto pgram = fft::periodogram(x);
    std::vector<double> reg(m), logi(m);
    for (std::size_t j = 1; j <= m; ++j) {
        if (!(pgram[j] > 0.0))
            throw NumericalError("gph_estimate: zero periodogram ordinate at frequency " +
                                 std::to_string(j));
        const double lambda = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        reg[j - 1] = -2.0 * std::log(2.0 * std::sin(lambda / 2.0));
        logi[j - 1] = std::log(pgram[j]);
    }
    const auto fit = fit_line(reg, logi);
    LongMemoryEstimate e;
    e.d_hat = fit.slope;
    e.std_error = std::numbers::pi / std::sqrt(24.0 * static_cast<double>(m));
    e.ols_std_error = fit.slope_stderr;
    e.bandwidth = m;
    return e;
}

/// DFA-1 at q = 2 with the default scale grid. The input is treated as
/// increments (the profile is built internally).
inline double hurst_dfa(std::span<const double> x) {
    detail::require(x.size() >= 256, "hurst_dfa: need at least 256 observations");
    MfdfaConfig config;
    config.q_grid = {2.0};
    config.order = 1;
    const auto surface = fluctuation_surface(x, config);
    return generalized_hurst(surface).rho.front();
}

struct FracDiffConfig {
    double d = 0.0;
    /// Largest lag K kept in the filter.
    std::size_t max_lags = 500;
    /// Weights with |w_k| below this end the filter early; 0 disables.
    double weight_cutoff = 0.0;

    /// K = min(500, n / 4) and cutoff 1e-5.
    static FracDiffConfig defaults(double d, std::size_t n) {
        return {d, std::max<std::size_t>(1, std::min<std::size_t>(500, n / 4)), 1e-5};
    }
};

/// w_0 = 1, w_k = w_{k-1} (k - 1 - d) / k for k = 1..max_lags.
inline std::vector<double> frac_diff_weights(double d, std::size_t max_lags,
                                             double weight_cutoff = 0.0) {
    std::vector<double> w{1.0};
    w.reserve(max_lags + 1);
    for (std::size_t k = 1; k <= max_lags; ++k) {
        const double next = w.back() * (static_cast<double>(k) - 1.0 - d) / static_cast<double>(k);
        if (weight_cutoff > 0.0 && std::abs(next) < weight_cutoff) break;
        w.push_back(next);
    }
    return w;
}

struct FracDiffResult {
    std::vector<double> values;
    /// Leading samples computed from a partial filter.
    std::size_t burn_in = 0;
    std::vector<double> weights;
};

/// y_t = sum_{k=0}^{min(K,t)} w_k x_{t-k}; output has the input's length.
inline FracDiffResult frac_diff(std::span<const double> x, const FracDiffConfig& config) {
    detail::require(config.max_lags >= 1, "frac_diff: truncation must be at least 1");
    detail::require(x.size() > config.max_lags,
                    "frac_diff: truncation " + std::to_string(config.max_lags) +
                        " not below series length " + std::to_string(x.size()));
    FracDiffResult r;
    r.weights = frac_diff_weights(config.d, config.max_lags, config.weight_cutoff);
    const std::size_t k_max = r.weights.size() - 1;
    r.burn_in = k_max;
    r.values.resize(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        const std::size_t kk = std::min(k_max, t);
        double acc = 0.0;
        for (std::size_t k = 0; k <= kk; ++k) acc += r.weights[k] * x[t - k];
        r.values[t] = acc;
    }
    return r;
}

/// One-step inverse of frac_diff: given the differenced value y_t and the
/// true past levels, x_t = y_t - sum_{k>=1} w_k x_{t-k}.
inline double frac_integrate_at(std::span<const double> weights, std::span<const double> levels,
                                std::size_t t, double y_t) {
    const std::size_t kk = std::min(weights.size() - 1, t);
    double acc = 0.0;
    for (std::size_t k = 1; k <= kk; ++k) acc += weights[k] * levels[t - k];
    return y_t - acc;
}

/// Exact inverse of frac_diff: rebuilds the levels recursively from the
/// differenced values and the same weights.
inline std::vector<double> frac_integrate(std::span<const double> y, std::span<const double> weights) {
    detail::require(!weights.empty() && weights[0] == 1.0, "frac_integrate: weights must start with 1");
    std::vector<double> x(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) x[t] = frac_integrate_at(weights, x, t, y[t]);
    return x;
}

/// Fractionally integrated Gaussian noise: seeded white noise filtered by
/// the (1 - B)^{-d} expansion, with an equal-length discarded warm-up.
inline std::vector<double> arfima_generate(double d, std::size_t n, std::uint64_t seed) {
    detail::require(std::abs(d) < 0.5, "arfima_generate: need |d| < 0.5");
    detail::require(n >= 1, "arfima_generate: empty request");
    const std::size_t total = 2 * n;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> e(total);
    for (double& v : e) v = z(rng);
    const auto psi = frac_diff_weights(-d, total - 1);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = n + i;
        double acc = 0.0;
        for (std::size_t k = 0; k <= t; ++k) acc += psi[k] * e[t - k];
        x[i] = acc;
    }
    return x;
}

}  // namespace smfdfa
