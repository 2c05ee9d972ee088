#pragma once

// Neural autoregressive one-step forecaster: p lagged values feed one
// sigmoid hidden layer and a linear output unit, trained full-batch by
// Levenberg-Marquardt on mean squared error. The pipeline comparison
// scores global (FD) against per-segment (LFD) fractional differencing.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smfdfa/error.hpp"
#include "smfdfa/longmemory.hpp"
#include "smfdfa/series.hpp"

namespace smfdfa {

struct LmConfig {
    double lambda_init = 1e-3;
    double lambda_factor = 10.0;
    double lambda_max = 1e10;
    std::size_t max_iterations = 200;
    /// Stop once the gradient's largest component falls below this.
    double gradient_tol = 1e-12;
};

struct NarConfig {
    std::size_t lags = 5;
    std::size_t hidden = 20;
    LmConfig trainer;
};

class NarModel {
public:
    NarModel() = default;
    NarModel(std::size_t lags, std::size_t hidden)
        : lags_(lags), hidden_(hidden), params_(Eigen::VectorXd::Zero(parameter_count(lags, hidden))) {}

    static std::size_t parameter_count(std::size_t lags, std::size_t hidden) {
        return hidden * lags + 2 * hidden + 1;
    }

    std::size_t lags() const noexcept { return lags_; }
    std::size_t hidden() const noexcept { return hidden_; }
    const Eigen::VectorXd& parameters() const noexcept { return params_; }
    Eigen::VectorXd& parameters() noexcept { return params_; }
    double scale_mean() const noexcept { return mean_; }
    double scale_std() const noexcept { return std_; }
    void set_scaling(double mean, double sd) {
        detail::require(sd > 0.0 && std::isfinite(sd) && std::isfinite(mean),
                        "NarModel: normalization must be invertible");
        mean_ = mean;
        std_ = sd;
    }

    std::uint64_t seed = 0;
    /// Loss after initialization and after every accepted step.
    std::vector<double> loss_trace;
    std::size_t iterations = 0;

    /// Network output on standardized lags (oldest first).
    double forward_standardized(std::span<const double> z) const {
        double out = params_[bias2_index()];
        for (std::size_t j = 0; j < hidden_; ++j) {
            double a = params_[bias1_index(j)];
            for (std::size_t k = 0; k < lags_; ++k) a += params_[weight1_index(j, k)] * z[k];
            out += params_[weight2_index(j)] * sigmoid(a);
        }
        return out;
    }

    /// One-step prediction from the `lags` most recent values, oldest first.
    double predict(std::span<const double> window) const {
        detail::require(window.size() == lags_, "NarModel::predict: window size must equal lags");
        std::vector<double> z(lags_);
        for (std::size_t k = 0; k < lags_; ++k) z[k] = (window[k] - mean_) / std_;
        return mean_ + std_ * forward_standardized(z);
    }

    static double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

    std::size_t weight1_index(std::size_t j, std::size_t k) const { return j * lags_ + k; }
    std::size_t bias1_index(std::size_t j) const { return hidden_ * lags_ + j; }
    std::size_t weight2_index(std::size_t j) const { return hidden_ * lags_ + hidden_ + j; }
    std::size_t bias2_index() const { return hidden_ * lags_ + 2 * hidden_; }

private:
    std::size_t lags_ = 0;
    std::size_t hidden_ = 0;
    Eigen::VectorXd params_;
    double mean_ = 0.0;
    double std_ = 1.0;
};

namespace detail {

struct LagDesign {
    Eigen::MatrixXd inputs;  // rows: samples, cols: standardized lags (oldest first)
    Eigen::VectorXd targets;
};

inline LagDesign lag_design(std::span<const double> x, std::size_t lags, double mean, double sd,
                            std::size_t end) {
    const std::size_t n = end - lags;
    LagDesign d{Eigen::MatrixXd(n, lags), Eigen::VectorXd(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < lags; ++k) d.inputs(i, k) = (x[i + k] - mean) / sd;
        d.targets[i] = (x[i + lags] - mean) / sd;
    }
    return d;
}

/// Residuals (prediction minus target) and, optionally, their Jacobian.
inline Eigen::VectorXd nar_residuals(const NarModel& m, const LagDesign& d,
                                     Eigen::MatrixXd* jacobian) {
    const auto n = d.inputs.rows();
    const auto& p = m.parameters();
    const std::size_t h = m.hidden();
    const std::size_t lags = m.lags();
    Eigen::VectorXd r(n);
    if (jacobian) jacobian->resize(n, p.size());
    std::vector<double> act(h);
    for (Eigen::Index i = 0; i < n; ++i) {
        double out = p[m.bias2_index()];
        for (std::size_t j = 0; j < h; ++j) {
            double a = p[m.bias1_index(j)];
            for (std::size_t k = 0; k < lags; ++k) a += p[m.weight1_index(j, k)] * d.inputs(i, k);
            act[j] = NarModel::sigmoid(a);
            out += p[m.weight2_index(j)] * act[j];
        }
        r[i] = out - d.targets[i];
        if (!jacobian) continue;
        auto& jac = *jacobian;
        for (std::size_t j = 0; j < h; ++j) {
            const double back = p[m.weight2_index(j)] * act[j] * (1.0 - act[j]);
            for (std::size_t k = 0; k < lags; ++k) jac(i, m.weight1_index(j, k)) = back * d.inputs(i, k);
            jac(i, m.bias1_index(j)) = back;
            jac(i, m.weight2_index(j)) = act[j];
        }
        jac(i, m.bias2_index()) = 1.0;
    }
    return r;
}

}  // namespace detail

/// Trains on every (p lags -> next value) pair of the series. Inputs and
/// targets share one standardization taken from the series itself.
/// Initial weights are uniform in +-1/sqrt(fan-in) from the seed; no data
/// shuffling takes place, so equal inputs and seeds give equal weights.
inline NarModel train_nar(std::span<const double> x, const NarConfig& config, std::uint64_t seed) {
    const std::size_t p = config.lags;
    detail::require(p >= 1 && config.hidden >= 1, "train_nar: lags and hidden units must be positive");
    detail::require(x.size() >= p + 50, "train_nar: series of length " + std::to_string(x.size()) +
                                            " shorter than lags + 50");
    for (std::size_t i = 0; i < x.size(); ++i)
        detail::require(std::isfinite(x[i]), "train_nar: non-finite value at index " + std::to_string(i));

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(x.size()));
    if (!(sd > 0.0)) sd = 1.0;

    NarModel model(p, config.hidden);
    model.set_scaling(mean, sd);
    model.seed = seed;
    std::mt19937_64 rng(seed);
    auto uniform = [&](double bound) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return bound * (2.0 * u - 1.0);
    };
    auto& params = model.parameters();
    const double in_bound = 1.0 / std::sqrt(static_cast<double>(p));
    const double out_bound = 1.0 / std::sqrt(static_cast<double>(config.hidden));
    for (std::size_t j = 0; j < config.hidden; ++j) {
        for (std::size_t k = 0; k < p; ++k) params[model.weight1_index(j, k)] = uniform(in_bound);
        params[model.bias1_index(j)] = uniform(in_bound);
        params[model.weight2_index(j)] = uniform(out_bound);
    }
    params[model.bias2_index()] = 0.0;

    const auto design = detail::lag_design(x, p, mean, sd, x.size());
    const double n = static_cast<double>(design.targets.size());
    const auto& lm = config.trainer;

    Eigen::MatrixXd jac;
    Eigen::VectorXd r = detail::nar_residuals(model, design, &jac);
    double loss = r.squaredNorm() / n;
    model.loss_trace.push_back(loss);
    double lambda = lm.lambda_init;

    for (std::size_t it = 0; it < lm.max_iterations; ++it) {
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        if (grad.cwiseAbs().maxCoeff() < lm.gradient_tol || loss == 0.0) break;

        bool accepted = false;
        while (lambda <= lm.lambda_max) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal().array() += lambda;
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            const Eigen::VectorXd saved = params;
            params += step;
            const Eigen::VectorXd r_new = detail::nar_residuals(model, design, nullptr);
            const double loss_new = r_new.squaredNorm() / n;
            if (std::isfinite(loss_new) && loss_new < loss) {
                loss = loss_new;
                lambda = std::max(lambda / lm.lambda_factor, 1e-15);
                accepted = true;
                break;
            }
            params = saved;
            lambda *= lm.lambda_factor;
        }
        if (!accepted) break;  // damping cap reached: no further descent available
        r = detail::nar_residuals(model, design, &jac);
        model.loss_trace.push_back(loss);
        model.iterations = it + 1;
    }
    if (!std::isfinite(loss))
        throw NumericalError("train_nar: training diverged, last loss " + std::to_string(loss));
    return model;
}

/// Mean absolute percentage error, 100/n sum |A - F| / |A|.
inline double mape(std::span<const double> actual, std::span<const double> forecast) {
    detail::require(actual.size() == forecast.size() && !actual.empty(),
                    "mape: actual and forecast must be equal-length and nonempty");
    double acc = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        if (actual[t] == 0.0)
            throw NumericalError("mape: zero actual value at index " + std::to_string(t));
        acc += std::abs((actual[t] - forecast[t]) / actual[t]);
    }
    return 100.0 * acc / static_cast<double>(actual.size());
}

struct Reconstruction {
    /// fitted[i] forecasts series[first + i] from the true lags before it.
    std::vector<double> fitted;
    std::size_t first = 0;
    double mape = 0.0;
};

/// One-step-ahead fitted values for t = p..T-1 with teacher forcing.
inline Reconstruction reconstruct(const NarModel& model, std::span<const double> x,
                                  bool score = true) {
    const std::size_t p = model.lags();
    detail::require(x.size() > p, "reconstruct: series not longer than the lag count");
    Reconstruction rec;
    rec.first = p;
    rec.fitted.reserve(x.size() - p);
    for (std::size_t t = p; t < x.size(); ++t) rec.fitted.push_back(model.predict(x.subspan(t - p, p)));
    if (score) rec.mape = mape(x.subspan(p), rec.fitted);
    return rec;
}

// ---------------------------------------------------------------------------
// FD-NAR vs LFD-NAR
// ---------------------------------------------------------------------------

enum class ForecastMethod { fd, lfd };
enum class ScoreScale { level, differenced };

inline const char* to_string(ForecastMethod m) { return m == ForecastMethod::fd ? "FD-NAR" : "LFD-NAR"; }
inline const char* to_string(ScoreScale s) { return s == ScoreScale::level ? "level" : "differenced"; }

struct PipelineConfig {
    NarConfig nar;
    std::vector<std::uint64_t> seeds{1};
    std::vector<ForecastMethod> methods{ForecastMethod::fd, ForecastMethod::lfd};
    ScoreScale scale = ScoreScale::level;
    /// Fraction of each evaluation window held out for scoring; 0 scores
    /// the in-sample reconstruction.
    double holdout_fraction = 0.0;
    std::optional<std::size_t> gph_bandwidth;
};

struct ForecastRow {
    std::size_t segment = 0;
    std::string label;
    ForecastMethod method = ForecastMethod::fd;
    std::uint64_t seed = 0;
    double d_used = 0.0;
    std::optional<double> mape;
    std::string status = "ok";
    /// Absolute index (into the input levels) of the first scored value.
    std::size_t first_index = 0;
    std::vector<double> actual;
    std::vector<double> fitted;
};

struct ForecastSummary {
    double mean_mape_fd = 0.0;
    double mean_mape_lfd = 0.0;
    std::size_t compared_pairs = 0;
    std::size_t lfd_not_worse = 0;
};

struct ForecastReport {
    std::string label;
    std::vector<std::size_t> breaks;
    std::vector<ForecastRow> rows;
    ForecastSummary summary;
    PipelineConfig config;
};

namespace detail {

struct Scored {
    double mape = 0.0;
    std::vector<double> actual;
    std::vector<double> fitted;
    std::size_t first = 0;  // index in the method's base coordinates
};

/// Trains on y[start, end) and scores the one-step forecasts. On the level
/// scale each forecast is integrated back with the true past levels.
inline Scored score_window(std::span<const double> y, std::span<const double> levels,
                           std::span<const double> weights, std::size_t start, std::size_t end,
                           const PipelineConfig& config, std::uint64_t seed) {
    const auto window = y.subspan(start, end - start);
    const std::size_t p = config.nar.lags;
    std::size_t train_end = window.size();
    if (config.holdout_fraction > 0.0) {
        const auto held = static_cast<std::size_t>(
            std::floor(config.holdout_fraction * static_cast<double>(window.size() - p)));
        train_end = window.size() - std::max<std::size_t>(held, 1);
    }
    const auto model = train_nar(window.first(train_end), config.nar, seed);
    const auto rec = reconstruct(model, window, false);

    Scored s;
    const std::size_t score_from = config.holdout_fraction > 0.0 ? train_end : p;
    s.first = start + score_from;
    for (std::size_t i = score_from; i < window.size(); ++i) {
        const std::size_t t = start + i;
        const double y_hat = rec.fitted[i - p];
        if (config.scale == ScoreScale::level) {
            s.actual.push_back(levels[t]);
            s.fitted.push_back(frac_integrate_at(weights, levels, t, y_hat));
        } else {
            s.actual.push_back(y[t]);
            s.fitted.push_back(y_hat);
        }
    }
    s.mape = mape(s.actual, s.fitted);
    return s;
}

}  // namespace detail

/// FD-NAR differences the whole series with one GPH order; LFD-NAR
/// estimates and differences each segment on its own. Both methods train a
/// separate network per segment over a common window that skips every
/// filter burn-in, so rows for the same segment score the same dates.
inline ForecastReport pipeline_compare(std::span<const double> levels,
                                       const std::vector<std::size_t>& breaks,
                                       const PipelineConfig& config, std::string label = {}) {
    detail::require(!config.seeds.empty(), "pipeline_compare: no seeds");
    detail::require(config.holdout_fraction >= 0.0 && config.holdout_fraction < 1.0,
                    "pipeline_compare: holdout fraction must lie in [0, 1)");
    const SegmentedSeries split(std::vector<double>(levels.begin(), levels.end()), breaks, 1);

    ForecastReport report;
    report.label = label;
    report.breaks = breaks;
    report.config = config;

    const double d_global = gph_estimate(levels, config.gph_bandwidth).d_hat;
    const auto global = frac_diff(levels, FracDiffConfig::defaults(d_global, levels.size()));

    for (std::size_t si = 0; si < split.count(); ++si) {
        const auto range = split.ranges()[si];
        const auto seg = split.segment(si);
        const std::string seg_label = label + "#" + std::to_string(si + 1);

        std::optional<FracDiffResult> local;
        double d_local = 0.0;
        std::string local_problem;
        try {
            d_local = gph_estimate(seg, config.gph_bandwidth).d_hat;
            local = frac_diff(seg, FracDiffConfig::defaults(d_local, seg.size()));
        } catch (const std::exception& e) {
            local_problem = e.what();
        }

        std::size_t skip = global.burn_in > range.begin ? global.burn_in - range.begin : 0;
        if (local) skip = std::max(skip, local->burn_in);

        for (const auto method : config.methods) {
            for (const auto seed : config.seeds) {
                ForecastRow row;
                row.segment = si;
                row.label = seg_label;
                row.method = method;
                row.seed = seed;
                row.d_used = method == ForecastMethod::fd ? d_global : d_local;
                if (!local) {
                    row.status = "too short: " + local_problem;
                    report.rows.push_back(std::move(row));
                    continue;
                }
                if (skip + config.nar.lags + 50 > seg.size()) {
                    row.status = "too short: segment leaves fewer than lags + 50 samples after burn-in";
                    report.rows.push_back(std::move(row));
                    continue;
                }
                try {
                    detail::Scored s =
                        method == ForecastMethod::fd
                            ? detail::score_window(global.values, levels, global.weights,
                                                   range.begin + skip, range.end, config, seed)
                            : detail::score_window(local->values, seg, local->weights, skip,
                                                   seg.size(), config, seed);
                    row.mape = s.mape;
                    row.first_index = method == ForecastMethod::fd ? s.first : range.begin + s.first;
                    row.actual = std::move(s.actual);
                    row.fitted = std::move(s.fitted);
                } catch (const NumericalError& e) {
                    row.status = std::string("failed: ") + e.what();
                } catch (const InputError& e) {
                    row.status = std::string("too short: ") + e.what();
                }
                report.rows.push_back(std::move(row));
            }
        }
    }

    double sum_fd = 0.0, sum_lfd = 0.0;
    std::size_t n_fd = 0, n_lfd = 0;
    for (const auto& r : report.rows) {
        if (!r.mape) continue;
        if (r.method == ForecastMethod::fd) {
            sum_fd += *r.mape;
            ++n_fd;
        } else {
            sum_lfd += *r.mape;
            ++n_lfd;
        }
    }
    report.summary.mean_mape_fd = n_fd ? sum_fd / static_cast<double>(n_fd) : 0.0;
    report.summary.mean_mape_lfd = n_lfd ? sum_lfd / static_cast<double>(n_lfd) : 0.0;
    for (const auto& a : report.rows) {
        if (a.method != ForecastMethod::fd || !a.mape) continue;
        for (const auto& b : report.rows) {
            if (b.method == ForecastMethod::lfd && b.segment == a.segment && b.seed == a.seed && b.mape) {
                ++report.summary.compared_pairs;
                if (*b.mape <= *a.mape) ++report.summary.lfd_not_worse;
            }
        }
    }
    return report;
}

inline ForecastReport pipeline_compare(const TimeSeries& series, const std::vector<std::size_t>& breaks,
                                       const PipelineConfig& config) {
    return pipeline_compare(series.values(), breaks, config, series.label());
}

}  // namespace smfdfa
