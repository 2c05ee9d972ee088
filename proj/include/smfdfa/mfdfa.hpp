#pragma once

// Multifractal detrended fluctuation analysis of one segment: profile,
// two-sided windowing, order-m polynomial detrending, q-th order
// fluctuation functions, generalized Hurst exponents, tau(q) and the
// Legendre singularity spectrum. Also the fluctuation-analysis partition
// function for normalized measures and the binomial cascade benchmark.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smfdfa/error.hpp"
#include "smfdfa/regression.hpp"

namespace smfdfa {

struct MfdfaConfig {
    std::vector<double> q_grid;
    /// Empty selects default_scale_grid() for each segment's length.
    std::vector<std::size_t> scale_grid;
    int order = 1;
    /// Inclusive [min, max] scale bounds used for slope fitting.
    std::optional<std::pair<std::size_t, std::size_t>> regression_range;
};

/// -5 to 5 in steps of 0.5; q = 0 uses the logarithmic average.
inline std::vector<double> default_q_grid(double q_min = -5.0, double q_max = 5.0,
                                          double step = 0.5) {
    detail::require(step > 0.0 && q_max >= q_min, "q grid: invalid bounds");
    std::vector<double> q;
    const auto count = static_cast<std::size_t>(std::llround((q_max - q_min) / step));
    for (std::size_t i = 0; i <= count; ++i) {
        double v = q_min + step * static_cast<double>(i);
        if (std::abs(v) < 1e-12 * step) v = 0.0;
        q.push_back(v);
    }
    return q;
}

/// About `count` log-spaced integer scales from max(16, order + 2) to
/// floor(length / 4), duplicates removed.
inline std::vector<std::size_t> default_scale_grid(std::size_t length, int order = 1,
                                                   std::size_t count = 20,
                                                   std::size_t min_scale = 16) {
    const std::size_t lo = std::max<std::size_t>(min_scale, static_cast<std::size_t>(order) + 2);
    const std::size_t hi = length / 4;
    if (hi < lo)
        throw InputError("segment of length " + std::to_string(length) +
                         " too short for MF-DFA (needs at least " + std::to_string(4 * lo) + ")");
    std::vector<std::size_t> s;
    if (count <= 1 || hi == lo) return {lo};
    const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo));
    for (std::size_t i = 0; i < count; ++i) {
        const double v = static_cast<double>(lo) *
                         std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
        const auto r = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(v)), lo, hi);
        if (s.empty() || r > s.back()) s.push_back(r);
    }
    return s;
}

struct FluctuationSurface {
    std::vector<double> q;
    std::vector<std::size_t> scales;
    /// phi[iq][is] = phi_q(s)
    std::vector<std::vector<double>> phi;
    std::vector<std::size_t> n_windows;
    std::size_t length = 0;
    std::string label;
    MfdfaConfig config;
};

struct HurstCurve {
    std::vector<double> q;
    std::vector<double> rho;
    std::vector<double> std_error;
    std::vector<double> r2;
    std::string label;
};

enum class SpectrumMethod {
    /// alpha = rho + q rho', rho' by central differences on the q grid.
    hurst_derivative,
    /// alpha = d tau / dq by central differences, f = q alpha - tau.
    tau_derivative,
};

struct SingularitySpectrum {
    std::vector<double> q;
    std::vector<double> tau;
    std::vector<double> alpha;
    std::vector<double> f;
    double delta_alpha = 0.0;
    /// alpha is expected to be non-increasing in q; finite samples can fold.
    bool alpha_monotone = true;
    std::string label;
};

struct PartitionFunction {
    std::vector<double> q;
    std::vector<std::size_t> scales;
    /// z[iq][is] = Z_q(s)
    std::vector<std::vector<double>> z;
    std::vector<double> tau_fa;
    /// Exponent of the FA fluctuation function {mean |p|^q}^(1/q).
    std::vector<double> rho_fa;
};

namespace detail {

/// Orthonormal basis of polynomials of degree <= order sampled at 1..s.
inline std::vector<std::vector<double>> polynomial_basis(std::size_t s, int order) {
    std::vector<std::vector<double>> basis;
    const double centre = (static_cast<double>(s) + 1.0) / 2.0;
    for (int deg = 0; deg <= order; ++deg) {
        std::vector<double> v(s);
        for (std::size_t k = 0; k < s; ++k)
            v[k] = std::pow((static_cast<double>(k + 1) - centre) / static_cast<double>(s), deg);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : basis) {
                double dot = 0.0;
                for (std::size_t k = 0; k < s; ++k) dot += v[k] * e[k];
                for (std::size_t k = 0; k < s; ++k) v[k] -= dot * e[k];
            }
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Mean squared residual of y after projecting out the basis. Residuals at
/// round-off level relative to the window's own magnitude count as zero.
inline double detrended_variance(std::span<const double> y,
                                 const std::vector<std::vector<double>>& basis,
                                 std::vector<double>& scratch) {
    const std::size_t s = y.size();
    scratch.assign(y.begin(), y.end());
    double energy = 0.0;
    for (double v : y) energy += v * v;
    for (const auto& e : basis) {
        double dot = 0.0;
        for (std::size_t k = 0; k < s; ++k) dot += scratch[k] * e[k];
        for (std::size_t k = 0; k < s; ++k) scratch[k] -= dot * e[k];
    }
    double rss = 0.0;
    for (double r : scratch) rss += r * r;
    constexpr double tol = 64.0 * std::numeric_limits<double>::epsilon();
    if (rss <= tol * tol * energy) return 0.0;
    return rss / static_cast<double>(s);
}

}  // namespace detail

/// Y(j) = sum_{t<=j} (x_t - mean(x)).
inline std::vector<double> profile(std::span<const double> x) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    std::vector<double> y(x.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] - mean;
        y[i] = acc;
    }
    return y;
}

/// Detrended variances of the 2 floor(T/s) windows at scale s: first the
/// windows laid from the start, then the windows laid back from the end.
inline std::vector<double> window_variances(std::span<const double> prof, std::size_t s,
                                            int order) {
    const std::size_t t = prof.size();
    const std::size_t per_side = t / s;
    const auto basis = detail::polynomial_basis(s, order);
    std::vector<double> var;
    var.reserve(2 * per_side);
    std::vector<double> scratch;
    for (std::size_t g = 0; g < per_side; ++g)
        var.push_back(detail::detrended_variance(prof.subspan(g * s, s), basis, scratch));
    for (std::size_t g = 0; g < per_side; ++g)
        var.push_back(
            detail::detrended_variance(prof.subspan(t - (g + 1) * s, s), basis, scratch));
    return var;
}

/// phi_q(s) for every (q, s) cell of the configuration. q = 0 uses
/// exp(mean(ln sigma^2) / 2), the q -> 0 limit of the power mean.
inline FluctuationSurface fluctuation_surface(std::span<const double> segment,
                                              const MfdfaConfig& config, std::string label = {}) {
    detail::require(config.order >= 1, "mfdfa: detrend order must be at least 1");
    detail::require(!config.q_grid.empty(), "mfdfa: empty q grid");
    const std::size_t t = segment.size();
    const auto scales =
        config.scale_grid.empty() ? default_scale_grid(t, config.order) : config.scale_grid;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const auto s = scales[i];
        detail::require(s >= static_cast<std::size_t>(config.order) + 2,
                        "mfdfa: scale " + std::to_string(s) + " below order + 2");
        detail::require(i == 0 || s > scales[i - 1], "mfdfa: scale grid must be increasing");
    }
    detail::require(t >= 4 * scales.back(),
                    "mfdfa: segment of length " + std::to_string(t) +
                        " shorter than 4 x largest scale " + std::to_string(scales.back()));

    FluctuationSurface out;
    out.q = config.q_grid;
    out.scales = scales;
    out.length = t;
    out.label = std::move(label);
    out.config = config;
    out.config.scale_grid = scales;
    out.phi.assign(out.q.size(), std::vector<double>(scales.size(), 0.0));

    const auto prof = profile(segment);
    std::vector<double> log_var;
    std::vector<double> terms;
    for (std::size_t is = 0; is < scales.size(); ++is) {
        const std::size_t s = scales[is];
        const auto var = window_variances(prof, s, config.order);
        out.n_windows.push_back(var.size());

        const auto zero = std::find(var.begin(), var.end(), 0.0);
        const double n = static_cast<double>(var.size());
        log_var.resize(var.size());
        for (std::size_t g = 0; g < var.size(); ++g) log_var[g] = std::log(var[g]);

        for (std::size_t iq = 0; iq < out.q.size(); ++iq) {
            const double q = out.q[iq];
            if (q <= 0.0 && zero != var.end()) {
                throw NumericalError("mfdfa: zero detrended variance at scale s=" +
                                     std::to_string(s) + ", window " +
                                     std::to_string(zero - var.begin() + 1) +
                                     " with non-positive moment q=" + std::to_string(q));
            }
            if (q == 0.0) {
                double acc = 0.0;
                for (double lv : log_var) acc += lv;
                out.phi[iq][is] = std::exp(0.5 * acc / n);
                continue;
            }
            // log-sum-exp of (q/2) ln sigma^2 keeps extreme moments finite.
            terms.resize(var.size());
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t g = 0; g < var.size(); ++g) {
                terms[g] = 0.5 * q * log_var[g];
                top = std::max(top, terms[g]);
            }
            if (top == -std::numeric_limits<double>::infinity()) {
                out.phi[iq][is] = 0.0;
                continue;
            }
            double acc = 0.0;
            for (double v : terms) acc += std::exp(v - top);
            out.phi[iq][is] = std::exp((top + std::log(acc / n)) / q);
        }
    }
    return out;
}

/// Slope of log10 phi_q(s) on log10 s for each q, over the configured
/// regression range. Scales where phi is not positive are skipped.
inline HurstCurve generalized_hurst(const FluctuationSurface& surface) {
    HurstCurve c;
    c.q = surface.q;
    c.label = surface.label;
    const auto& range = surface.config.regression_range;
    for (std::size_t iq = 0; iq < surface.q.size(); ++iq) {
        std::vector<double> xs, ys;
        for (std::size_t is = 0; is < surface.scales.size(); ++is) {
            const auto s = surface.scales[is];
            if (range && (s < range->first || s > range->second)) continue;
            const double phi = surface.phi[iq][is];
            if (!(phi > 0.0) || !std::isfinite(phi)) continue;
            xs.push_back(std::log10(static_cast<double>(s)));
            ys.push_back(std::log10(phi));
        }
        if (xs.size() < 4)
            throw NumericalError("generalized_hurst: fewer than 4 usable scales at q=" +
                                 std::to_string(surface.q[iq]));
        const auto fit = fit_line(xs, ys);
        c.rho.push_back(fit.slope);
        c.std_error.push_back(fit.slope_stderr);
        c.r2.push_back(fit.r2);
    }
    return c;
}

namespace detail {

/// Central differences on a non-uniform grid, one-sided at the ends.
inline std::vector<double> grid_derivative(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
        d[i] = (y[hi] - y[lo]) / (x[hi] - x[lo]);
    }
    return d;
}

}  // namespace detail

inline SingularitySpectrum scaling_and_spectrum(
    const HurstCurve& curve, SpectrumMethod method = SpectrumMethod::hurst_derivative) {
    const std::size_t n = curve.q.size();
    detail::require(n >= 5 && curve.rho.size() == n,
                    "scaling_and_spectrum: need rho on at least 5 q points");
    for (std::size_t i = 1; i < n; ++i)
        detail::require(curve.q[i] > curve.q[i - 1], "scaling_and_spectrum: q grid not increasing");

    SingularitySpectrum sp;
    sp.q = curve.q;
    sp.label = curve.label;
    sp.tau.resize(n);
    sp.alpha.resize(n);
    sp.f.resize(n);
    for (std::size_t i = 0; i < n; ++i) sp.tau[i] = curve.q[i] * curve.rho[i] - 1.0;

    if (method == SpectrumMethod::hurst_derivative) {
        const auto drho = detail::grid_derivative(curve.q, curve.rho);
        for (std::size_t i = 0; i < n; ++i) {
            sp.alpha[i] = curve.rho[i] + curve.q[i] * drho[i];
            sp.f[i] = curve.q[i] * (sp.alpha[i] - curve.rho[i]) + 1.0;
        }
    } else {
        const auto dtau = detail::grid_derivative(curve.q, sp.tau);
        for (std::size_t i = 0; i < n; ++i) {
            sp.alpha[i] = dtau[i];
            sp.f[i] = curve.q[i] * sp.alpha[i] - sp.tau[i];
        }
    }
    const auto [lo, hi] = std::minmax_element(sp.alpha.begin(), sp.alpha.end());
    sp.delta_alpha = *hi - *lo;
    for (std::size_t i = 1; i < n; ++i)
        if (sp.alpha[i] > sp.alpha[i - 1] + 1e-12) sp.alpha_monotone = false;
    return sp;
}

/// Box-probability partition function Z_q(s) = sum |p_s|^q over the
/// floor(T/s) leading boxes; trailing remainders are dropped and empty
/// boxes are excluded from the sum.
inline PartitionFunction fa_partition(std::span<const double> measure,
                                      const std::vector<double>& q_grid,
                                      const std::vector<std::size_t>& scales) {
    detail::require(!q_grid.empty() && scales.size() >= 2, "fa_partition: need q values and 2+ scales");
    double total = 0.0;
    for (std::size_t i = 0; i < measure.size(); ++i) {
        detail::require(measure[i] >= 0.0,
                        "fa_partition: negative mass at index " + std::to_string(i));
        total += measure[i];
    }
    detail::require(std::abs(total - 1.0) <= 1e-9, "fa_partition: measure does not sum to 1");
    for (auto s : scales)
        detail::require(s >= 1 && s <= measure.size(), "fa_partition: scale out of range");

    PartitionFunction pf;
    pf.q = q_grid;
    pf.scales = scales;
    pf.z.assign(q_grid.size(), std::vector<double>(scales.size(), 0.0));
    std::vector<double> log_fa(scales.size());
    std::vector<std::vector<double>> log_fluct(q_grid.size(), std::vector<double>(scales.size()));
    for (std::size_t is = 0; is < scales.size(); ++is) {
        const std::size_t s = scales[is];
        const std::size_t boxes = measure.size() / s;
        std::vector<double> p;
        p.reserve(boxes);
        for (std::size_t g = 0; g < boxes; ++g) {
            double sum = 0.0;
            for (std::size_t k = 0; k < s; ++k) sum += measure[g * s + k];
            if (sum > 0.0) p.push_back(sum);
        }
        for (std::size_t iq = 0; iq < q_grid.size(); ++iq) {
            const double q = q_grid[iq];
            double z = 0.0;
            for (double v : p) z += std::pow(v, q);
            pf.z[iq][is] = z;
            const double mean = z / static_cast<double>(boxes);
            log_fluct[iq][is] =
                q == 0.0 ? 0.0 : std::log10(mean) / q;  // q = 0 has no FA power mean
        }
    }
    std::vector<double> ls(scales.size());
    for (std::size_t is = 0; is < scales.size(); ++is)
        ls[is] = std::log10(static_cast<double>(scales[is]));
    for (std::size_t iq = 0; iq < q_grid.size(); ++iq) {
        std::vector<double> lz(scales.size());
        for (std::size_t is = 0; is < scales.size(); ++is) lz[is] = std::log10(pf.z[iq][is]);
        pf.tau_fa.push_back(fit_line(ls, lz).slope);
        pf.rho_fa.push_back(q_grid[iq] == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                              : fit_line(ls, log_fluct[iq]).slope);
    }
    return pf;
}

/// Binomial multiplicative measure of length 2^levels: each dyadic split
/// gives weight b1 to the left half and b2 to the right. With a seed, each
/// split independently swaps the two weights with probability 1/2.
inline std::vector<double> generate_cascade(double b1, double b2, int levels,
                                            std::optional<std::uint64_t> shuffle_seed = {}) {
    detail::require(b1 > b2 && b2 > 0.0, "generate_cascade: need b1 > b2 > 0");
    detail::require(std::abs(b1 + b2 - 1.0) <= 1e-9, "generate_cascade: need b1 + b2 = 1");
    detail::require(levels >= 1 && levels <= 30, "generate_cascade: levels must be in [1, 30]");

    std::vector<double> m{1.0};
    std::mt19937_64 rng(shuffle_seed.value_or(0));
    for (int level = 0; level < levels; ++level) {
        std::vector<double> next(m.size() * 2);
        for (std::size_t i = 0; i < m.size(); ++i) {
            const bool swap = shuffle_seed && (rng() >> 63) != 0;
            next[2 * i] = m[i] * (swap ? b2 : b1);
            next[2 * i + 1] = m[i] * (swap ? b1 : b2);
        }
        m.swap(next);
    }
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    for (double& v : m) v /= total;
    return m;
}

/// Closed-form generalized Hurst exponent of the binomial cascade,
/// rho(q) = 1/q - ln(b1^q + b2^q) / (q ln 2). Near q = 0 a second-order
/// expansion of ln(b1^q + b2^q) about 0 replaces the 0/0 form.
inline double analytic_rho(double b1, double b2, double q) {
    detail::require(b1 > 0.0 && b2 > 0.0, "analytic_rho: weights must be positive");
    const double l1 = std::log(b1);
    const double l2 = std::log(b2);
    const double ln2 = std::log(2.0);
    if (std::abs(q) < 1e-4) {
        // ln(b1^q + b2^q) = ln 2 + q (l1 + l2)/2 + q^2 ((l1 - l2)/2)^2 / 2 + O(q^3)
        const double half_diff = 0.5 * (l1 - l2);
        return (-(0.5 * (l1 + l2)) - 0.5 * q * half_diff * half_diff) / ln2;
    }
    // log-sum-exp form of ln(b1^q + b2^q)
    const double a = q * l1;
    const double b = q * l2;
    const double top = std::max(a, b);
    const double lse = top + std::log(std::exp(a - top) + std::exp(b - top));
    return 1.0 / q - lse / (q * ln2);
}

/// tau(q) = -log2(b1^q + b2^q) for a normalized cascade.
inline double analytic_tau(double b1, double b2, double q) {
    return -std::log2(std::pow(b1, q) + std::pow(b2, q));
}

/// Surface, Hurst curve and spectrum for one segment.
struct SegmentAnalysis {
    FluctuationSurface surface;
    HurstCurve curve;
    SingularitySpectrum spectrum;
};

inline SegmentAnalysis analyze_segment(std::span<const double> segment, const MfdfaConfig& config,
                                       std::string label = {},
                                       SpectrumMethod method = SpectrumMethod::hurst_derivative) {
    SegmentAnalysis a;
    a.surface = fluctuation_surface(segment, config, std::move(label));
    a.curve = generalized_hurst(a.surface);
    a.spectrum = scaling_and_spectrum(a.curve, method);
    return a;
}

}  // namespace smfdfa
