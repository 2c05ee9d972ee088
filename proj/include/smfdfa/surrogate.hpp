#pragma once

// Shuffled and phase-randomized surrogates, and the spectrum-width
// comparison of an original series against an ensemble of them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "smfdfa/error.hpp"
#include "smfdfa/fft.hpp"
#include "smfdfa/mfdfa.hpp"
#include "smfdfa/series.hpp"

namespace smfdfa {

enum class SurrogateKind { shuffle, phase };

inline const char* to_string(SurrogateKind k) {
    return k == SurrogateKind::shuffle ? "shuffle" : "phase";
}

/// Generator for ensemble member `index` under a base seed.
inline std::mt19937_64 member_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

inline std::vector<double> shuffle(std::span<const double> x, std::uint64_t seed) {
    detail::require(x.size() >= 2, "shuffle: need at least 2 values");
    std::vector<double> out(x.begin(), x.end());
    std::mt19937_64 rng(seed);
    // Fisher-Yates with an explicit bounded draw so the permutation does not
    // depend on the standard library's distribution implementation.
    for (std::size_t i = out.size() - 1; i > 0; --i) {
        const std::uint64_t bound = i + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do r = rng();
        while (r >= limit);
        std::swap(out[i], out[r % bound]);
    }
    return out;
}

/// Keeps every Fourier amplitude and replaces the phases of the bins
/// strictly between DC and Nyquist with uniform angles.
inline std::vector<double> phase_surrogate(std::span<const double> x, std::uint64_t seed) {
    detail::require(x.size() >= 16, "phase_surrogate: need at least 16 values");
    const std::size_t n = x.size();
    auto spec = fft::rfft(x);
    std::mt19937_64 rng(seed);
    const std::size_t last = n % 2 == 0 ? n / 2 - 1 : n / 2;
    for (std::size_t k = 1; k <= last; ++k) {
        // 53-bit uniform in [0, 1)
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        spec[k] = std::polar(std::abs(spec[k]), 2.0 * std::numbers::pi * u);
    }
    return fft::irfft(spec, n);
}

struct SurrogateEnsemble {
    SurrogateKind kind = SurrogateKind::shuffle;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> series;
    std::size_t size() const noexcept { return series.size(); }
};

inline SurrogateEnsemble make_ensemble(std::span<const double> x, SurrogateKind kind,
                                       std::size_t n, std::uint64_t seed) {
    SurrogateEnsemble e;
    e.kind = kind;
    e.seed = seed;
    e.series.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t member_seed = member_rng(seed, i)();
        e.series.push_back(kind == SurrogateKind::shuffle ? shuffle(x, member_seed)
                                                          : phase_surrogate(x, member_seed));
    }
    return e;
}

struct SurrogateComparison {
    SurrogateKind kind = SurrogateKind::shuffle;
    std::uint64_t seed = 0;
    std::size_t n_requested = 0;
    double original_delta_alpha = 0.0;
    std::vector<double> surrogate_delta_alphas;
    std::size_t n_failed = 0;
    /// rank / (n + 1), rank = 1 + #{surrogates strictly below the original}.
    double quantile = 0.0;

    /// Type-7 percentile of the surrogate widths.
    double surrogate_percentile(double p) const {
        return smfdfa::quantile(surrogate_delta_alphas, p);
    }
};

/// Delta-alpha of the whole series against `n` surrogates analysed with the
/// same configuration. Surrogates whose analysis fails are dropped and
/// counted in n_failed.
inline SurrogateComparison surrogate_test(std::span<const double> x, SurrogateKind kind,
                                          std::size_t n, const MfdfaConfig& config,
                                          std::uint64_t seed) {
    detail::require(n >= 10, "surrogate_test: need at least 10 surrogates");
    SurrogateComparison c;
    c.kind = kind;
    c.seed = seed;
    c.n_requested = n;
    c.original_delta_alpha = analyze_segment(x, config).spectrum.delta_alpha;

    const auto ensemble = make_ensemble(x, kind, n, seed);
    for (const auto& member : ensemble.series) {
        try {
            c.surrogate_delta_alphas.push_back(analyze_segment(member, config).spectrum.delta_alpha);
        } catch (const NumericalError&) {
            ++c.n_failed;
        }
    }
    if (c.surrogate_delta_alphas.empty())
        throw NumericalError("surrogate_test: every surrogate failed MF-DFA");
    std::size_t below = 0;
    for (double v : c.surrogate_delta_alphas)
        if (v < c.original_delta_alpha) ++below;
    c.quantile = static_cast<double>(below + 1) /
                 static_cast<double>(c.surrogate_delta_alphas.size() + 1);
    return c;
}

}  // namespace smfdfa
