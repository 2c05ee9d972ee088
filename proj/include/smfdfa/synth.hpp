#pragma once

// Seeded synthetic series used as validation inputs: Gaussian and
// Student-t noise, fractional Gaussian noise, AR(1), and mean steps.
// The binomial cascade lives in mfdfa.hpp, ARFIMA in longmemory.hpp.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "smfdfa/error.hpp"
#include "smfdfa/fft.hpp"

namespace smfdfa::synth {

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    std::vector<double> x(n);
    for (double& v : x) v = dist(rng);
    return x;
}

inline std::vector<double> student_t(std::size_t n, double dof, std::uint64_t seed) {
    detail::require(dof > 0.0, "student_t: degrees of freedom must be positive");
    std::mt19937_64 rng(seed);
    std::student_t_distribution<double> dist(dof);
    std::vector<double> x(n);
    for (double& v : x) v = dist(rng);
    return x;
}

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
inline double fgn_autocovariance(double hurst, std::size_t k) {
    const double h2 = 2.0 * hurst;
    const double kk = static_cast<double>(k);
    return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
}

/// Exact fractional Gaussian noise by circulant embedding (Davies-Harte).
inline std::vector<double> fgn(std::size_t n, double hurst, std::uint64_t seed) {
    detail::require(hurst > 0.0 && hurst < 1.0, "fgn: Hurst exponent must lie in (0, 1)");
    detail::require(n >= 2, "fgn: need at least 2 samples");
    const std::size_t m = 2 * n;
    std::vector<double> row(m);
    for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(hurst, k);
    for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];
    const auto eig = fft::rfft(row);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<std::complex<double>> w(n + 1);
    const double md = static_cast<double>(m);
    for (std::size_t k = 0; k <= n; ++k) {
        const double lambda = eig[k].real();
        if (lambda < -1e-8 * eig[0].real())
            throw NumericalError("fgn: circulant embedding is not nonnegative definite");
        const double l = std::max(lambda, 0.0);
        if (k == 0 || k == n) {
            w[k] = {std::sqrt(l / md) * z(rng), 0.0};
        } else {
            const double a = z(rng);
            const double b = z(rng);
            w[k] = std::sqrt(l / (2.0 * md)) * std::complex<double>(a, b);
        }
    }
    auto x = fft::irfft(w, m);
    x.resize(n);
    for (double& v : x) v *= md;
    return x;
}

/// x_t = phi x_{t-1} + e_t, started from the stationary distribution.
inline std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed, double sigma = 1.0) {
    detail::require(std::abs(phi) < 1.0, "ar1: need |phi| < 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> e(0.0, sigma);
    std::vector<double> x(n);
    double prev = e(rng) / std::sqrt(1.0 - phi * phi);
    for (double& v : x) {
        prev = phi * prev + e(rng);
        v = prev;
    }
    return x;
}

/// Gaussian noise whose mean jumps from 0 to `shift` at index `at`.
inline std::vector<double> step(std::size_t n, std::size_t at, double shift, std::uint64_t seed,
                                double sigma = 1.0) {
    detail::require(at < n, "step: change index must lie inside the series");
    auto x = white_noise(n, seed, sigma);
    for (std::size_t i = at; i < n; ++i) x[i] += shift;
    return x;
}

}  // namespace smfdfa::synth
