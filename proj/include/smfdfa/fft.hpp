#pragma once

// Thin RAII wrappers over FFTW's real transforms. Plans use FFTW_ESTIMATE
// so the same input always takes the same code path.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "smfdfa/error.hpp"

namespace smfdfa::fft {

namespace detail {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
struct PlanDestroy {
    void operator()(fftw_plan p) const noexcept { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

template <class T>
std::unique_ptr<T[], FftwFree> alloc(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
    if (p == nullptr) throw std::bad_alloc();
    return std::unique_ptr<T[], FftwFree>(p);
}

}  // namespace detail

/// Unnormalized forward transform X_k = sum_t x_t exp(-2 pi i k t / n),
/// k = 0..n/2.
inline std::vector<std::complex<double>> rfft(std::span<const double> x) {
    const std::size_t n = x.size();
    smfdfa::detail::require(n >= 1, "rfft: empty input");
    auto in = detail::alloc<double>(n);
    auto out = detail::alloc<fftw_complex>(n / 2 + 1);
    detail::Plan plan(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    std::copy(x.begin(), x.end(), in.get());
    fftw_execute(plan.get());
    std::vector<std::complex<double>> spec(n / 2 + 1);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] = {out[k][0], out[k][1]};
    return spec;
}

/// Inverse of rfft for a length-n real signal, including the 1/n factor.
inline std::vector<double> irfft(std::span<const std::complex<double>> spec, std::size_t n) {
    smfdfa::detail::require(spec.size() == n / 2 + 1, "irfft: spectrum size does not match n");
    auto in = detail::alloc<fftw_complex>(spec.size());
    auto out = detail::alloc<double>(n);
    detail::Plan plan(fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    for (std::size_t k = 0; k < spec.size(); ++k) {
        in[k][0] = spec[k].real();
        in[k][1] = spec[k].imag();
    }
    fftw_execute(plan.get());
    std::vector<double> x(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = out[t] * scale;
    return x;
}

/// Periodogram I(lambda_j) = |X_j|^2 / (2 pi n) at lambda_j = 2 pi j / n,
/// j = 0..n/2, of the demeaned series.
inline std::vector<double> periodogram(std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::vector<double> c(x.begin(), x.end());
    for (double& v : c) v -= mean;
    const auto spec = rfft(c);
    std::vector<double> out(spec.size());
    const double norm = 1.0 / (2.0 * 3.14159265358979323846 * static_cast<double>(x.size()));
    for (std::size_t k = 0; k < spec.size(); ++k) out[k] = std::norm(spec[k]) * norm;
    return out;
}

}  // namespace smfdfa::fft
