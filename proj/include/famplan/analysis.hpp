#pragma once

// Rule comparisons: the birth probability at which two rules give the same
// expected family size, and parameter sweeps emitted as CSV plot data.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "famplan/series.hpp"
#include "famplan/share.hpp"

namespace famplan {

struct CrossingResult {
    double probability = 0.0;
    /// Final bracket; upper - lower <= tol.
    double lower = 0.0;
    double upper = 0.0;
    /// More than one sign change was seen on the coarse grid; the leftmost was refined.
    bool multiple_sign_changes = false;
    count_t sign_changes = 0;
};

inline constexpr double crossing_scan_begin = 0.01;
inline constexpr double crossing_scan_end = 0.99;
inline constexpr int crossing_scan_points = 97;

namespace detail {

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace detail

/// Root of F_a(p) - F_b(p) by bisection, after a coarse scan for sign changes.
/// Series inside the root finder run at tol/10.
inline CrossingResult crossing_probability(const Rule& rule_a, const Rule& rule_b, double tol,
                                           const SeriesOptions& options = {}) {
    require_nonempty(rule_a, "crossing_probability");
    require_nonempty(rule_b, "crossing_probability");
    if (!(tol > 0.0)) {
        throw DomainError("crossing_probability: tolerance must be positive");
    }
    const double series_tol = tol / 10.0;
    auto difference = [&](double p) {
        const BirthProbability prob(p);
        return expected_family_size(rule_a, prob, series_tol, options).value -
               expected_family_size(rule_b, prob, series_tol, options).value;
    };

    std::vector<double> grid(crossing_scan_points);
    std::vector<double> values(crossing_scan_points);
    const double step = (crossing_scan_end - crossing_scan_begin) / (crossing_scan_points - 1);
    for (int i = 0; i < crossing_scan_points; ++i) {
        grid[i] = i + 1 == crossing_scan_points ? crossing_scan_end : crossing_scan_begin + step * i;
        values[i] = difference(grid[i]);
    }

    // A bracket is a strict sign change between neighbours, or an exact zero
    // with strictly opposite signs on either side.
    std::vector<std::pair<double, double>> brackets;
    for (int i = 0; i + 1 < crossing_scan_points; ++i) {
        const int a = detail::sign_of(values[i]);
        const int b = detail::sign_of(values[i + 1]);
        if (a * b < 0) {
            brackets.emplace_back(grid[i], grid[i + 1]);
        } else if (b == 0 && i + 2 < crossing_scan_points && a * detail::sign_of(values[i + 2]) < 0) {
            brackets.emplace_back(grid[i + 1], grid[i + 1]);
        }
    }
    if (brackets.empty()) {
        throw NoSignChangeError("crossing_probability: F" + rule_a.to_string() + " - F" + rule_b.to_string() +
                                " does not change sign on [0.01, 0.99]");
    }

    CrossingResult result;
    result.sign_changes = brackets.size();
    result.multiple_sign_changes = brackets.size() > 1;
    auto [lo, hi] = brackets.front();
    if (lo != hi) {
        double f_lo = difference(lo);
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = difference(mid);
            if (f_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if (detail::sign_of(f_mid) == detail::sign_of(f_lo)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
    }
    result.lower = lo;
    result.upper = hi;
    result.probability = 0.5 * (lo + hi);
    return result;
}

enum class SweepQuantity { family_size, girls, boys, ratio, societal_share, average_share };

inline std::string_view sweep_quantity_name(SweepQuantity q) {
    switch (q) {
    case SweepQuantity::family_size: return "F";
    case SweepQuantity::girls: return "G";
    case SweepQuantity::boys: return "B";
    case SweepQuantity::ratio: return "ratio";
    case SweepQuantity::societal_share: return "societal_share";
    case SweepQuantity::average_share: return "average_share";
    }
    return "?";
}

inline SweepQuantity parse_sweep_quantity(std::string_view name) {
    for (auto q : {SweepQuantity::family_size, SweepQuantity::girls, SweepQuantity::boys, SweepQuantity::ratio,
                   SweepQuantity::societal_share, SweepQuantity::average_share}) {
        if (sweep_quantity_name(q) == name) {
            return q;
        }
    }
    throw DomainError("unknown sweep quantity '" + std::string(name) +
                      "' (expected F, G, B, ratio, societal_share or average_share)");
}

inline double evaluate_quantity(SweepQuantity q, const Rule& rule, BirthProbability p, double tol,
                                const SeriesOptions& options = {}) {
    switch (q) {
    case SweepQuantity::family_size: return expected_family_size(rule, p, tol, options).value;
    case SweepQuantity::girls: return expected_girls(rule, p, tol, options).value;
    case SweepQuantity::boys: return expected_boys(rule, p, tol, options).value;
    case SweepQuantity::ratio: return gender_ratio(rule, p, tol, options);
    case SweepQuantity::societal_share: return societal_share(rule, p, tol, options);
    case SweepQuantity::average_share: return average_share(rule, p, tol, options).value;
    }
    return std::nan("");
}

struct SweepCell {
    std::string name;
    /// Empty when the evaluation failed; `error` then says why.
    std::optional<double> value;
    std::string error;
};

struct SweepRow {
    double p = 0.0;
    std::vector<SweepCell> cells;
};

struct SweepRequest {
    std::vector<Rule> rules;
    std::vector<SweepQuantity> quantities;
    double p_start = 0.1;
    double p_end = 0.9;
    count_t steps = 81;
    double tol = 1e-10;
    /// Additional probabilities merged into the uniform grid.
    std::vector<double> extra_points;
};

/// Column names in output order: quantities outer, rules inner, e.g. "F(1,1)".
inline std::vector<std::string> sweep_columns(const SweepRequest& request) {
    std::vector<std::string> names;
    for (auto q : request.quantities) {
        for (const auto& rule : request.rules) {
            names.push_back(std::string(sweep_quantity_name(q)) + rule.to_string());
        }
    }
    return names;
}

inline std::vector<double> sweep_grid(const SweepRequest& request) {
    if (!(request.p_start > 0.0 && request.p_start < request.p_end && request.p_end < 1.0)) {
        throw DomainError("sweep: need 0 < from < to < 1");
    }
    if (request.steps < 2) {
        throw DomainError("sweep: steps must be at least 2");
    }
    std::vector<double> grid;
    const double width = request.p_end - request.p_start;
    for (count_t i = 0; i < request.steps; ++i) {
        grid.push_back(i + 1 == request.steps
                           ? request.p_end
                           : request.p_start + width * static_cast<double>(i) / static_cast<double>(request.steps - 1));
    }
    for (double x : request.extra_points) {
        if (!(x > 0.0 && x < 1.0)) {
            throw DomainError("sweep: extra point " + std::to_string(x) + " is outside (0,1)");
        }
        grid.push_back(x);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Evaluates every (quantity, rule) column on the grid. A failing cell is
/// recorded and the sweep continues.
inline std::vector<SweepRow> sweep(const SweepRequest& request, const SeriesOptions& options = {}) {
    if (request.rules.empty() || request.quantities.empty()) {
        throw DomainError("sweep: need at least one rule and one quantity");
    }
    for (const auto& rule : request.rules) {
        require_nonempty(rule, "sweep");
    }
    if (!(request.tol > 0.0)) {
        throw DomainError("sweep: tolerance must be positive");
    }
    const auto grid = sweep_grid(request);
    const auto names = sweep_columns(request);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double p : grid) {
        SweepRow row{p, {}};
        std::size_t column = 0;
        for (auto q : request.quantities) {
            for (const auto& rule : request.rules) {
                SweepCell cell{names[column++], std::nullopt, {}};
                try {
                    cell.value = evaluate_quantity(q, rule, BirthProbability(p), request.tol, options);
                } catch (const NumericError& e) {
                    cell.error = e.what();
                }
                row.cells.push_back(std::move(cell));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Shortest round-trip-safe decimal (17 significant digits).
inline std::string format_full_precision(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

/// Header "p,<columns>", one LF-terminated line per row. Failed cells are
/// written as "nan".
inline void write_sweep_csv(std::ostream& out, const std::vector<std::string>& columns,
                            const std::vector<SweepRow>& rows) {
    out << "p";
    for (const auto& name : columns) {
        out << ',' << name;
    }
    out << '\n';
    for (const auto& row : rows) {
        out << format_full_precision(row.p);
        for (const auto& cell : row.cells) {
            out << ',' << (cell.value ? format_full_precision(*cell.value) : std::string("nan"));
        }
        out << '\n';
    }
}

} // namespace famplan
