#pragma once

// Exhaustive enumeration of birth sequences. Walks every sequence depth-first,
// stops a branch at the first prefix that satisfies the rule and weights the
// outcome by the product of its per-birth probabilities. Uses nothing from the
// series machinery, so it serves as the independent reference for it.

#include <string>

#include "famplan/core.hpp"

namespace famplan {

inline constexpr count_t default_enumeration_cap = 24;

namespace detail {

// Extended precision: tens of thousands of leaves are summed naively.
struct ExtendedSums {
    long double mass = 0, boys = 0, girls = 0, total = 0, girl_share = 0, martingale = 0;
};

struct EnumerationState {
    const Rule& rule;
    long double boy_p;
    long double girl_p;
    count_t max_children;
    ExtendedSums sums;
};

inline void enumerate_from(EnumerationState& state, count_t boys, count_t girls, long double weight) {
    const count_t t = boys + girls;
    if (state.rule.satisfied_by(boys, girls)) {
        auto& s = state.sums;
        const auto b = static_cast<long double>(boys);
        const auto g = static_cast<long double>(girls);
        s.mass += weight;
        s.boys += weight * b;
        s.girls += weight * g;
        s.total += weight * (b + g);
        s.girl_share += weight * g / (b + g);
        s.martingale += weight * (b / state.boy_p - g / state.girl_p);
        return;
    }
    if (t == state.max_children) {
        return;
    }
    enumerate_from(state, boys + 1, girls, weight * state.boy_p);
    enumerate_from(state, boys, girls + 1, weight * state.girl_p);
}

} // namespace detail

/// Probability-weighted statistics over all outcomes with T <= max_children.
inline TruncatedExpectations enumerate_brute_force(const Rule& rule, BirthProbability p, count_t max_children,
                                                   count_t cap = default_enumeration_cap) {
    require_nonempty(rule, "enumerate_brute_force");
    if (max_children == 0) {
        throw DomainError("enumerate_brute_force: max_children must be positive");
    }
    if (max_children > cap) {
        throw DomainError("enumerate_brute_force: max_children " + std::to_string(max_children) +
                          " exceeds the enumeration cap of " + std::to_string(cap));
    }
    detail::EnumerationState state{rule, p.boy(), p.girl(), max_children, {}};
    detail::enumerate_from(state, 0, 0, 1.0L);
    const auto& s = state.sums;
    TruncatedExpectations out;
    out.max_children = max_children;
    out.mass_covered = static_cast<double>(s.mass);
    out.boys = static_cast<double>(s.boys);
    out.girls = static_cast<double>(s.girls);
    out.total = static_cast<double>(s.total);
    out.girl_share = static_cast<double>(s.girl_share);
    out.martingale = static_cast<double>(s.martingale);
    return out;
}

} // namespace famplan
