#pragma once

// Penalized change-point detection with a within-segment squared-deviation
// cost. Breaks are 0-based indices of the first sample of a new regime, so
// the 1-based split x_1..x_{h-1} | x_h..x_N corresponds to break h-1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smfdfa/error.hpp"
#include "smfdfa/series.hpp"

namespace smfdfa {

enum class CostStatistic { mean_and_variance, mean_only };
enum class ChangePointMethod { exact_dp, binary_segmentation };

inline const char* to_string(CostStatistic s) {
    return s == CostStatistic::mean_only ? "mean-only" : "mean-and-variance";
}
inline const char* to_string(ChangePointMethod m) {
    return m == ChangePointMethod::binary_segmentation ? "binary-segmentation" : "exact-dp";
}

struct ChangePointConfig {
    CostStatistic statistic = CostStatistic::mean_and_variance;
    /// Per-break penalty. Empty selects 2 * sigma^2 * ln N with sigma^2
    /// estimated from first differences.
    std::optional<double> penalty;
    std::optional<std::size_t> max_breaks;
    std::size_t min_segment = kDefaultMinSegment;
    ChangePointMethod method = ChangePointMethod::exact_dp;
    /// Drop candidates that can no longer be optimal (exact-dp, uncapped only).
    bool prune = false;
};

struct ChangePointResult {
    std::vector<std::size_t> breaks;
    double total_cost = 0.0;
    std::vector<double> segment_costs;
    ChangePointConfig config_used;  // penalty always resolved
};

/// Sum of squared deviations about the segment mean, i.e. length times the
/// population variance. Both statistics evaluate to the same number.
inline double segment_cost(std::span<const double> x,
                           CostStatistic statistic = CostStatistic::mean_and_variance) {
    (void)statistic;
    detail::require(!x.empty(), "segment_cost: empty segment");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss;
}

/// O(1) segment costs from prefix sums of the globally centred series.
class SegmentCostTable {
public:
    explicit SegmentCostTable(std::span<const double> x) : s1_(x.size() + 1), s2_(x.size() + 1) {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(std::max<std::size_t>(x.size(), 1));
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double c = x[i] - mean;
            s1_[i + 1] = s1_[i] + c;
            s2_[i + 1] = s2_[i] + c * c;
        }
    }

    std::size_t size() const noexcept { return s1_.size() - 1; }

    /// Cost of the half-open range [begin, end).
    double cost(std::size_t begin, std::size_t end) const {
        const double n = static_cast<double>(end - begin);
        const double a = s1_[end] - s1_[begin];
        const double c = (s2_[end] - s2_[begin]) - a * a / n;
        return c > 0.0 ? c : 0.0;
    }

private:
    std::vector<double> s1_;
    std::vector<double> s2_;
};

/// 2 * sigma^2 * ln N, sigma^2 = sum(dx^2) / (2 (N-1)).
inline double default_penalty(std::span<const double> x) {
    detail::require(x.size() >= 2, "default_penalty: need at least 2 samples");
    double ss = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) ss += (x[i] - x[i - 1]) * (x[i] - x[i - 1]);
    const double sigma2 = ss / (2.0 * static_cast<double>(x.size() - 1));
    return 2.0 * sigma2 * std::log(static_cast<double>(x.size()));
}

namespace detail {

inline ChangePointConfig resolve(std::span<const double> x, ChangePointConfig config) {
    require(config.min_segment >= 2, "change-point: min_segment must be at least 2");
    if (config.penalty) {
        require(*config.penalty >= 0.0 && !std::isnan(*config.penalty),
                "change-point: penalty must be nonnegative");
    } else {
        config.penalty = default_penalty(x);
    }
    return config;
}

inline ChangePointResult finish(const SegmentCostTable& table, std::vector<std::size_t> breaks,
                                double total, const ChangePointConfig& config) {
    ChangePointResult r;
    std::size_t begin = 0;
    for (auto b : breaks) {
        r.segment_costs.push_back(table.cost(begin, b));
        begin = b;
    }
    r.segment_costs.push_back(table.cost(begin, table.size()));
    r.breaks = std::move(breaks);
    r.total_cost = total;
    r.config_used = config;
    return r;
}

struct SingleSplit {
    std::size_t at = 0;
    double cost = std::numeric_limits<double>::infinity();
};

/// Best split of [begin, end) with both parts at least min_segment long;
/// the smallest index wins ties.
inline SingleSplit best_split(const SegmentCostTable& table, std::size_t begin, std::size_t end,
                              std::size_t min_segment) {
    SingleSplit best;
    if (end - begin < 2 * min_segment) return best;
    for (std::size_t h = begin + min_segment; h + min_segment <= end; ++h) {
        const double d = table.cost(begin, h) + table.cost(h, end);
        if (d < best.cost) best = {h, d};
    }
    return best;
}

inline ChangePointResult exact_dp_uncapped(const SegmentCostTable& table,
                                           const ChangePointConfig& config) {
    const std::size_t n = table.size();
    const std::size_t ms = config.min_segment;
    const double theta = *config.penalty;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n + 1, inf);
    std::vector<std::size_t> last(n + 1, 0);

    // Candidate last breaks s > 0, kept sorted ascending for the tie rule.
    std::vector<std::size_t> candidates;
    // (s, time from which s may be discarded)
    std::vector<std::pair<std::size_t, std::size_t>> retiring;
    std::vector<char> flagged(n + 1, 0);

    for (std::size_t t = ms; t <= n; ++t) {
        if (t >= 2 * ms) {
            const std::size_t s_new = t - ms;
            if (s_new >= ms) {
                candidates.insert(std::lower_bound(candidates.begin(), candidates.end(), s_new),
                                  s_new);
            }
        }
        if (config.prune && !retiring.empty()) {
            std::vector<std::pair<std::size_t, std::size_t>> keep;
            for (const auto& [s, from] : retiring) {
                if (from <= t) {
                    const auto it = std::lower_bound(candidates.begin(), candidates.end(), s);
                    if (it != candidates.end() && *it == s) candidates.erase(it);
                } else {
                    keep.emplace_back(s, from);
                }
            }
            retiring.swap(keep);
        }

        double value = table.cost(0, t);
        std::size_t arg = 0;
        for (auto s : candidates) {
            if (t - s < ms) continue;
            const double v = best[s] + table.cost(s, t) + theta;
            if (v < value) {
                value = v;
                arg = s;
            }
        }
        best[t] = value;
        last[t] = arg;

        if (config.prune) {
            for (auto s : candidates) {
                if (t - s < ms) continue;
                if (!flagged[s] && best[s] + table.cost(s, t) > value) {
                    flagged[s] = 1;
                    retiring.emplace_back(s, t + ms);
                }
            }
        }
    }

    std::vector<std::size_t> breaks;
    for (std::size_t t = n; last[t] != 0; t = last[t]) breaks.push_back(last[t]);
    std::reverse(breaks.begin(), breaks.end());
    return finish(table, std::move(breaks), best[n], config);
}

inline ChangePointResult exact_dp_capped(const SegmentCostTable& table,
                                         const ChangePointConfig& config, std::size_t max_breaks) {
    const std::size_t n = table.size();
    const std::size_t ms = config.min_segment;
    const double theta = *config.penalty;
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t kmax = std::min(max_breaks, n / ms - 1);

    // best[k][t]: penalized cost of x[0, t) split by exactly k breaks.
    std::vector<std::vector<double>> best(kmax + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<std::size_t>> last(kmax + 1, std::vector<std::size_t>(n + 1, 0));
    for (std::size_t t = ms; t <= n; ++t) best[0][t] = table.cost(0, t);
    for (std::size_t k = 1; k <= kmax; ++k) {
        for (std::size_t t = (k + 1) * ms; t <= n; ++t) {
            double value = inf;
            std::size_t arg = 0;
            for (std::size_t s = k * ms; s + ms <= t; ++s) {
                if (best[k - 1][s] == inf) continue;
                const double v = best[k - 1][s] + table.cost(s, t) + theta;
                if (v < value) {
                    value = v;
                    arg = s;
                }
            }
            best[k][t] = value;
            last[k][t] = arg;
        }
    }

    std::size_t k_best = 0;
    for (std::size_t k = 1; k <= kmax; ++k)
        if (best[k][n] < best[k_best][n]) k_best = k;

    std::vector<std::size_t> breaks;
    std::size_t t = n;
    for (std::size_t k = k_best; k > 0; --k) {
        t = last[k][t];
        breaks.push_back(t);
    }
    std::reverse(breaks.begin(), breaks.end());
    return finish(table, std::move(breaks), best[k_best][n], config);
}

inline ChangePointResult binary_segmentation(const SegmentCostTable& table,
                                             const ChangePointConfig& config) {
    const std::size_t n = table.size();
    const double theta = *config.penalty;
    const std::size_t cap = config.max_breaks.value_or(n);

    std::vector<std::size_t> breaks;
    while (breaks.size() < cap) {
        double best_gain = 0.0;
        std::size_t best_at = 0;
        std::size_t begin = 0;
        for (std::size_t i = 0; i <= breaks.size(); ++i) {
            const std::size_t end = i < breaks.size() ? breaks[i] : n;
            const auto split = best_split(table, begin, end, config.min_segment);
            if (split.cost < std::numeric_limits<double>::infinity()) {
                const double gain = table.cost(begin, end) - (split.cost + theta);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_at = split.at;
                }
            }
            begin = end;
        }
        if (best_at == 0) break;
        breaks.insert(std::lower_bound(breaks.begin(), breaks.end(), best_at), best_at);
    }

    double total = 0.0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= breaks.size(); ++i) {
        const std::size_t end = i < breaks.size() ? breaks[i] : n;
        total += table.cost(begin, end);
        if (i > 0) total += theta;
        begin = end;
    }
    return finish(table, std::move(breaks), total, config);
}

}  // namespace detail

/// Single best split minimizing cost(left) + cost(right). No penalty is
/// applied; total_cost is the unpenalized D(h).
inline ChangePointResult detect_single(std::span<const double> x, ChangePointConfig config = {}) {
    config = detail::resolve(x, config);
    detail::require(x.size() >= 2 * config.min_segment,
                    "detect_single: series of length " + std::to_string(x.size()) +
                        " is shorter than 2 * min_segment");
    const SegmentCostTable table(x);
    const auto split = detail::best_split(table, 0, x.size(), config.min_segment);
    config.max_breaks = 1;
    return detail::finish(table, {split.at}, split.cost, config);
}

/// Minimizes the sum of segment costs plus penalty * (number of breaks).
inline ChangePointResult detect_multiple(std::span<const double> x, ChangePointConfig config = {}) {
    config = detail::resolve(x, config);
    detail::require(x.size() >= config.min_segment,
                    "detect_multiple: series shorter than min_segment");
    if (config.max_breaks) {
        detail::require(x.size() >= (*config.max_breaks + 1) * config.min_segment,
                        "detect_multiple: series shorter than (max_breaks + 1) * min_segment");
    }
    const SegmentCostTable table(x);
    if (config.method == ChangePointMethod::binary_segmentation)
        return detail::binary_segmentation(table, config);
    if (config.max_breaks) return detail::exact_dp_capped(table, config, *config.max_breaks);
    return detail::exact_dp_uncapped(table, config);
}

/// Costs of a caller-supplied segmentation under the same objective; a
/// missing penalty counts as 0.
inline ChangePointResult evaluate_breaks(std::span<const double> x, std::vector<std::size_t> breaks,
                                         ChangePointConfig config = {}) {
    split_segments(x, breaks, 1);
    if (!config.penalty) config.penalty = 0.0;
    const SegmentCostTable table(x);
    auto r = detail::finish(table, std::move(breaks), 0.0, config);
    double total = 0.0;
    for (double c : r.segment_costs) total += c;
    r.total_cost = total + *config.penalty * static_cast<double>(r.breaks.size());
    return r;
}

}  // namespace smfdfa
