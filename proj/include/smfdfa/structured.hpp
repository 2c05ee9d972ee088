#pragma once

// Structured MF-DFA: detect regimes on the fluctuation transform, then run
// MF-DFA independently on every regime. With no detected break the single
// segment is analysed exactly like the whole series.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smfdfa/changepoint.hpp"
#include "smfdfa/error.hpp"
#include "smfdfa/mfdfa.hpp"
#include "smfdfa/series.hpp"

namespace smfdfa {

enum class SegmentStatus { ok, too_short, failed };

inline const char* to_string(SegmentStatus s) {
    switch (s) {
        case SegmentStatus::ok: return "ok";
        case SegmentStatus::too_short: return "too short";
        case SegmentStatus::failed: return "failed";
    }
    return "?";
}

struct SegmentReport {
    std::size_t index = 0;
    SegmentRange range;
    std::string label;
    SegmentStatus status = SegmentStatus::ok;
    std::string message;
    std::optional<SegmentAnalysis> analysis;
};

struct StructuredReport {
    std::string label;
    ChangePointResult changepoints;
    std::vector<SegmentReport> segments;
};

/// MF-DFA of every segment delimited by `breaks` over the given values.
/// Segments that cannot be analysed are flagged; the rest still report.
inline std::vector<SegmentReport> analyze_segments(std::span<const double> values,
                                                   const std::vector<std::size_t>& breaks,
                                                   const MfdfaConfig& config,
                                                   const std::string& label) {
    const SegmentedSeries split(std::vector<double>(values.begin(), values.end()), breaks, 1);
    std::vector<SegmentReport> out;
    for (std::size_t i = 0; i < split.count(); ++i) {
        SegmentReport r;
        r.index = i;
        r.range = split.ranges()[i];
        r.label = label + "#" + std::to_string(i + 1);
        try {
            r.analysis = analyze_segment(split.segment(i), config, r.label);
        } catch (const InputError& e) {
            r.status = SegmentStatus::too_short;
            r.message = e.what();
        } catch (const NumericalError& e) {
            r.status = SegmentStatus::failed;
            r.message = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

/// Change-point detection on an already transformed series followed by
/// per-segment MF-DFA. `breaks_override` skips detection.
inline StructuredReport s_mfdfa(const FluctSeries& fluct, const ChangePointConfig& cp_config,
                                const MfdfaConfig& mf_config,
                                std::optional<std::vector<std::size_t>> breaks_override = {}) {
    StructuredReport report;
    report.label = fluct.source_label;
    if (breaks_override) {
        report.changepoints = evaluate_breaks(fluct.values, *breaks_override, cp_config);
    } else {
        report.changepoints = detect_multiple(fluct.values, cp_config);
    }
    report.segments =
        analyze_segments(fluct.values, report.changepoints.breaks, mf_config, report.label);
    return report;
}

inline StructuredReport s_mfdfa(const TimeSeries& series, const ChangePointConfig& cp_config,
                                const MfdfaConfig& mf_config) {
    return s_mfdfa(to_fluctuations(series), cp_config, mf_config);
}

}  // namespace smfdfa
