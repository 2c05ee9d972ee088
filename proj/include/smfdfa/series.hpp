#pragma once

// Series ingestion, the absolute log-return transform, descriptive
// statistics, IQR outlier census and segmentation bookkeeping.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smfdfa/error.hpp"

namespace smfdfa {

inline constexpr std::size_t kDefaultMinSegment = 32;

enum class TimeAxis { index, date };

/// Timestamped real-valued observations. Dates are stored as days since
/// 1970-01-01; integer-indexed series store the index itself.
class TimeSeries {
public:
    TimeSeries() = default;

    TimeSeries(std::vector<std::int64_t> timestamps, std::vector<double> values,
               std::string label = {}, TimeAxis axis = TimeAxis::index)
        : timestamps_(std::move(timestamps)),
          values_(std::move(values)),
          label_(std::move(label)),
          axis_(axis) {
        detail::require(timestamps_.size() == values_.size(),
                        "time series: timestamp and value counts differ");
        detail::require(values_.size() >= 2, "time series: need at least 2 observations");
        for (std::size_t i = 1; i < timestamps_.size(); ++i) {
            detail::require(timestamps_[i] > timestamps_[i - 1],
                            "time series: timestamps not strictly increasing at position " +
                                std::to_string(i));
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            detail::require(std::isfinite(values_[i]),
                            "time series: non-finite value at position " + std::to_string(i));
        }
    }

    /// Integer-indexed series 0..n-1.
    static TimeSeries from_values(std::vector<double> values, std::string label = {}) {
        std::vector<std::int64_t> ts(values.size());
        std::iota(ts.begin(), ts.end(), std::int64_t{0});
        return TimeSeries(std::move(ts), std::move(values), std::move(label), TimeAxis::index);
    }

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const std::int64_t> timestamps() const noexcept { return timestamps_; }
    const std::string& label() const noexcept { return label_; }
    TimeAxis axis() const noexcept { return axis_; }

private:
    std::vector<std::int64_t> timestamps_;
    std::vector<double> values_;
    std::string label_;
    TimeAxis axis_ = TimeAxis::index;
};

/// Absolute log10 returns f_t = |log10(x(t+1)/x(t))|. timestamps[t] is the
/// stamp of the later observation x(t+1).
struct FluctSeries {
    std::vector<double> values;
    std::vector<std::int64_t> timestamps;
    std::string source_label;
    TimeAxis axis = TimeAxis::index;

    std::size_t size() const noexcept { return values.size(); }
};

inline std::string format_timestamp(std::int64_t stamp, TimeAxis axis) {
    if (axis == TimeAxis::index) return std::to_string(stamp);
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{stamp}}};
    std::ostringstream os;
    os << std::setfill('0') << std::setw(4) << static_cast<int>(ymd.year()) << '-'
       << std::setw(2) << static_cast<unsigned>(ymd.month()) << '-' << std::setw(2)
       << static_cast<unsigned>(ymd.day());
    return os.str();
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

struct CsvConfig {
    std::string date_column = "date";
    /// Empty selects the first column that is not the date column.
    std::string value_column;
    /// strftime-style format, or "index" for integer stamps.
    std::string date_format = "%Y-%m-%d";
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\"";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string_view rest(line);
    while (true) {
        const auto pos = rest.find(',');
        out.emplace_back(trim(rest.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        rest.remove_prefix(pos + 1);
    }
    return out;
}

inline std::optional<std::int64_t> parse_date(const std::string& text, const std::string& fmt) {
    std::tm tm{};
    std::istringstream is(text);
    is >> std::get_time(&tm, fmt.c_str());
    if (is.fail()) return std::nullopt;
    is >> std::ws;
    if (!is.eof()) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{tm.tm_year + 1900},
                                          std::chrono::month{static_cast<unsigned>(tm.tm_mon + 1)},
                                          std::chrono::day{static_cast<unsigned>(tm.tm_mday)}};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

inline std::optional<std::int64_t> parse_index(const std::string& text) {
    std::size_t used = 0;
    try {
        const long long v = std::stoll(text, &used);
        if (used != text.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline std::optional<double> parse_real(const std::string& text) {
    std::size_t used = 0;
    try {
        const double v = std::stod(text, &used);
        if (used != text.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace detail

/// Reads a headered CSV into a TimeSeries sorted by timestamp. Duplicate
/// stamps and unparseable rows are rejected with the offending line.
/// When the configured date column is absent but an "index" column exists,
/// integer stamps are read from it.
inline TimeSeries load_csv(const std::string& path, const CsvConfig& config = {}) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty file (header required)");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = detail::split_csv_line(line);

    std::string date_format = config.date_format;
    auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    auto date_col = find_col(config.date_column);
    if (!date_col) {
        date_col = find_col("index");
        if (!date_col)
            throw InputError(path + ": missing date column '" + config.date_column + "'");
        date_format = "index";
    }
    std::optional<std::size_t> value_col;
    if (config.value_column.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (i != *date_col) {
                value_col = i;
                break;
            }
        if (!value_col) throw InputError(path + ": no value column besides the date column");
    } else {
        value_col = find_col(config.value_column);
        if (!value_col)
            throw InputError(path + ": missing value column '" + config.value_column + "'");
    }

    const bool by_index = date_format == "index";
    std::vector<std::pair<std::int64_t, double>> rows;
    std::vector<std::string> raw_stamps;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        const auto where = path + ":" + std::to_string(line_no);
        if (fields.size() <= std::max(*date_col, *value_col))
            throw InputError(where + ": too few fields");
        const auto stamp = by_index ? detail::parse_index(fields[*date_col])
                                    : detail::parse_date(fields[*date_col], date_format);
        if (!stamp) throw InputError(where + ": unparseable date '" + fields[*date_col] + "'");
        const auto value = detail::parse_real(fields[*value_col]);
        if (!value || !std::isfinite(*value))
            throw InputError(where + ": unparseable value '" + fields[*value_col] + "'");
        rows.emplace_back(*stamp, *value);
        raw_stamps.push_back(fields[*date_col]);
    }

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return rows[a].first < rows[b].first; });
    std::vector<std::int64_t> stamps;
    std::vector<double> values;
    stamps.reserve(rows.size());
    values.reserve(rows.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& [stamp, value] = rows[order[k]];
        if (!stamps.empty() && stamps.back() == stamp)
            throw InputError(path + ": duplicate date " + raw_stamps[order[k]]);
        stamps.push_back(stamp);
        values.push_back(value);
    }
    if (values.size() < 2) throw InputError(path + ": need at least 2 observations");

    std::string label = path;
    if (const auto slash = label.find_last_of('/'); slash != std::string::npos)
        label.erase(0, slash + 1);
    return TimeSeries(std::move(stamps), std::move(values), std::move(label),
                      by_index ? TimeAxis::index : TimeAxis::date);
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

inline FluctSeries to_fluctuations(const TimeSeries& series) {
    const auto x = series.values();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0))
            throw InputError("to_fluctuations: non-positive value at index " + std::to_string(i));
    }
    FluctSeries out;
    out.source_label = series.label();
    out.axis = series.axis();
    out.values.reserve(x.size() - 1);
    out.timestamps.reserve(x.size() - 1);
    for (std::size_t t = 0; t + 1 < x.size(); ++t) {
        out.values.push_back(std::abs(std::log10(x[t + 1] / x[t])));
        out.timestamps.push_back(series.timestamps()[t + 1]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Descriptive statistics
// ---------------------------------------------------------------------------

/// Moments of a sample. std_dev uses the n-1 denominator; skewness and
/// excess kurtosis are the moment ratios m3/m2^1.5 and m4/m2^2 - 3 with
/// population central moments (the Jarque-Bera convention). Raw kurtosis
/// is excess_kurtosis + 3. Undefined quantities are empty.
struct DescriptiveStats {
    std::size_t n = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;
    std::optional<double> coef_variation;  // percent
    std::optional<double> skewness;
    std::optional<double> excess_kurtosis;
    std::optional<double> jarque_bera_stat;
};

inline DescriptiveStats describe(std::span<const double> x) {
    detail::require(x.size() >= 4, "describe: need at least 4 observations");
    DescriptiveStats s;
    s.n = x.size();
    const double n = static_cast<double>(x.size());
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    s.min = *lo;
    s.max = *hi;
    s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    s.mean = std::clamp(s.mean, s.min, s.max);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    s.std_dev = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;

    if (std::abs(s.mean) >= 1e-12 * s.std_dev && s.mean != 0.0)
        s.coef_variation = 100.0 * s.std_dev / std::abs(s.mean);
    if (m2 > 0.0) {
        const double skew = m3 / std::pow(m2, 1.5);
        const double kurt = m4 / (m2 * m2) - 3.0;
        s.skewness = skew;
        s.excess_kurtosis = kurt;
        s.jarque_bera_stat = n / 6.0 * (skew * skew + kurt * kurt / 4.0);
    }
    return s;
}

/// Type-7 quantile (linear interpolation between order statistics).
inline double quantile_sorted(std::span<const double> sorted, double p) {
    detail::require(!sorted.empty(), "quantile: empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::span<const double> x, double p) {
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, p);
}

/// Mild fences at 1.5 IQR, extreme fences at 3 IQR. Mild counts include
/// the extreme points on the same side.
struct OutlierCensus {
    std::size_t low_mild = 0;
    std::size_t high_mild = 0;
    std::size_t low_extreme = 0;
    std::size_t high_extreme = 0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
};

inline OutlierCensus outlier_census(std::span<const double> x) {
    detail::require(x.size() >= 4, "outlier_census: need at least 4 observations");
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    OutlierCensus c;
    c.q1 = quantile_sorted(v, 0.25);
    c.q3 = quantile_sorted(v, 0.75);
    c.iqr = c.q3 - c.q1;
    for (double xi : v) {
        if (xi < c.q1 - 1.5 * c.iqr) ++c.low_mild;
        if (xi < c.q1 - 3.0 * c.iqr) ++c.low_extreme;
        if (xi > c.q3 + 1.5 * c.iqr) ++c.high_mild;
        if (xi > c.q3 + 3.0 * c.iqr) ++c.high_extreme;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Segmentation
// ---------------------------------------------------------------------------

struct SegmentRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // one past the last sample
    std::size_t size() const noexcept { return end - begin; }
};

/// Contiguous, exhaustive partition of a parent sequence. A break is the
/// 0-based index of the first sample of a new segment.
class SegmentedSeries {
public:
    SegmentedSeries(std::vector<double> parent, std::vector<std::size_t> breaks,
                    std::size_t min_segment = kDefaultMinSegment)
        : parent_(std::move(parent)), breaks_(std::move(breaks)) {
        detail::require(!parent_.empty(), "split_segments: empty series");
        std::size_t begin = 0;
        for (std::size_t i = 0; i < breaks_.size(); ++i) {
            const auto b = breaks_[i];
            detail::require(b > 0 && b < parent_.size(),
                            "split_segments: break " + std::to_string(b) +
                                " outside the series interior");
            detail::require(i == 0 || b > breaks_[i - 1],
                            "split_segments: breaks must be strictly increasing");
            ranges_.push_back({begin, b});
            begin = b;
        }
        ranges_.push_back({begin, parent_.size()});
        for (std::size_t i = 0; i < ranges_.size(); ++i) {
            detail::require(ranges_[i].size() >= min_segment,
                            "split_segments: segment " + std::to_string(i) + " has " +
                                std::to_string(ranges_[i].size()) + " samples, minimum is " +
                                std::to_string(min_segment));
        }
    }

    std::size_t count() const noexcept { return ranges_.size(); }
    std::span<const double> parent() const noexcept { return parent_; }
    const std::vector<std::size_t>& breaks() const noexcept { return breaks_; }
    const std::vector<SegmentRange>& ranges() const noexcept { return ranges_; }
    std::span<const double> segment(std::size_t i) const {
        return std::span<const double>(parent_).subspan(ranges_.at(i).begin, ranges_[i].size());
    }

private:
    std::vector<double> parent_;
    std::vector<std::size_t> breaks_;
    std::vector<SegmentRange> ranges_;
};

inline SegmentedSeries split_segments(std::span<const double> values,
                                      std::vector<std::size_t> breaks,
                                      std::size_t min_segment = kDefaultMinSegment) {
    return SegmentedSeries(std::vector<double>(values.begin(), values.end()), std::move(breaks),
                           min_segment);
}

}  // namespace smfdfa
