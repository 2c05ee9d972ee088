#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "smfdfa/error.hpp"

namespace smfdfa {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
};

/// Unweighted least-squares line y = intercept + slope * x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size(), "fit_line: size mismatch");
    detail::require(x.size() >= 2, "fit_line: need at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    detail::require<NumericalError>(sxx > 0.0, "fit_line: regressor has zero spread");

    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        sse += r * r;
    }
    if (x.size() > 2) f.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    if (f.r2 < 0.0) f.r2 = 0.0;
    if (f.r2 > 1.0) f.r2 = 1.0;
    return f;
}

}  // namespace smfdfa
