#pragma once

// Girl shares. The societal share G/F divides expectations; the average share
// E[G_T / T] averages the per-family fraction. For the two-boys rule (2,0) the
// societal share is exactly 1-p while the average share is strictly smaller.

#include <cmath>

#include "famplan/series.hpp"

namespace famplan {

struct ShareReport {
    double societal_share = 0.0;
    double average_share = 0.0;
    /// societal_share - average_share
    double gap = 0.0;
    /// Tail bound of the average-share series.
    double average_tail_bound = 0.0;
};

/// G/F
inline double societal_share(const Rule& rule, BirthProbability p, double tol, const SeriesOptions& options = {}) {
    const auto girls = expected_girls(rule, p, tol, options);
    const auto size = expected_family_size(rule, p, tol, options);
    return girls.value / size.value;
}

/// E[G_T / T]. In the boy-last branch a family of t children has t-n girls,
/// in the girl-last branch exactly k.
inline SeriesResult average_share(const Rule& rule, BirthProbability p, double tol, const SeriesOptions& options = {}) {
    detail::check_series_inputs(rule, p, tol, "average_share");
    return detail::sum_statistic(
        rule, p,
        [](count_t boys, count_t girls) { return detail::as_real(girls) / detail::as_real(boys + girls); },
        WeightShape::unit_bounded, tol, options);
}

/// Average girl share for the two-boys rule:
/// 1 - 2 p/(1-p) (1 + p/(1-p) ln p).
inline double shammai_average_share_closed_form(BirthProbability prob) {
    const double odds = prob.odds();
    return 1.0 - 2.0 * odds * (1.0 + odds * std::log(prob.boy()));
}

inline ShareReport share_report(const Rule& rule, BirthProbability p, double tol, const SeriesOptions& options = {}) {
    ShareReport report;
    report.societal_share = societal_share(rule, p, tol, options);
    const auto average = average_share(rule, p, tol, options);
    report.average_share = average.value;
    report.average_tail_bound = average.tail_bound;
    report.gap = report.societal_share - report.average_share;
    return report;
}

} // namespace famplan
