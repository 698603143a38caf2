#pragma once

// Expectations under a stopping rule as truncated series with rigorous tail
// bounds.
//
// Every outcome ends with either a boy (the n-th) or a girl (the k-th). With
// l = T - 1, the boy-last branch has probability C(l, n-1) p^n (1-p)^(l+1-n)
// and the girl-last branch is its mirror image. Both sums start at
// l = n + k - 1. Consecutive base terms have ratio (l+1)/(l+2-m) * q, where m
// is the trigger count and q the probability of the other gender; for m >= 1
// this ratio is non-increasing in l and tends to q < 1, so once it drops below
// one the remaining tail is bounded by term * ratio / (1 - ratio).

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "famplan/core.hpp"

namespace famplan {

struct SeriesResult {
    double value = 0.0;
    /// Upper bound on |true value - value|.
    double tail_bound = 0.0;
    count_t terms_used = 0;
};

struct SeriesOptions {
    count_t term_cap = 100000;
};

/// Series evaluation is refused outside this band; the number of terms grows
/// like 1/min(p, 1-p).
inline constexpr double series_probability_floor = 1e-6;

/// How the per-outcome weight behaves along a branch. This decides which tail
/// bound is valid.
enum class WeightShape {
    /// Non-negative and affine in T (boys, girls, total, constants).
    affine,
    /// Bounded by one in absolute value (shares).
    unit_bounded,
};

namespace detail {

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

inline void check_series_inputs(const Rule& rule, BirthProbability p, double tol, const char* operation) {
    require_nonempty(rule, operation);
    if (!(tol > 0.0)) {
        throw DomainError(std::string(operation) + ": tolerance must be positive");
    }
    if (p.boy() < series_probability_floor || p.girl() < series_probability_floor) {
        throw NumericError(std::string(operation) + ": birth probability " + std::to_string(p.boy()) +
                           " is too close to 0 or 1 for series evaluation");
    }
}

/// Sums weight(trigger_count, other_count) * P(branch outcome) over one branch.
/// `trigger_required` births of the trigger gender (probability trigger_p) end
/// the branch, at least `other_required` of the other gender must be present.
/// With max_children > 0 the sum is cut at T <= max_children and no tail bound
/// is computed; otherwise terms are added until the tail bound is <= tol.
template <class Weight>
SeriesResult sum_branch(count_t trigger_required, count_t other_required, double trigger_p, Weight&& weight,
                        WeightShape shape, double tol, count_t term_cap, count_t max_children = 0) {
    SeriesResult result;
    if (trigger_required == 0) {
        return result;
    }
    const count_t m = trigger_required;
    const double other_p = 1.0 - trigger_p;
    count_t ell = m + other_required - 1;
    big_int coefficient = binomial_exact(ell, m - 1);
    CompensatedSum sum;
    for (;;) {
        const count_t t = ell + 1;
        if (max_children > 0 && t > max_children) {
            result.value = sum.value();
            result.tail_bound = std::numeric_limits<double>::quiet_NaN();
            return result;
        }
        if (result.terms_used >= term_cap) {
            throw TermCapError("series did not reach tolerance " + std::to_string(tol) + " within " +
                               std::to_string(term_cap) + " terms");
        }
        const double base = scaled_power_product(coefficient, trigger_p, m, other_p, t - m);
        const double w = weight(m, t - m);
        sum.add(w * base);
        ++result.terms_used;

        if (max_children == 0) {
            const double base_ratio = static_cast<double>(ell + 1) / static_cast<double>(ell + 2 - m) * other_p;
            double bound = std::numeric_limits<double>::infinity();
            if (shape == WeightShape::unit_bounded) {
                if (base_ratio < 1.0) {
                    bound = base * base_ratio / (1.0 - base_ratio);
                }
            } else if (w > 0.0) {
                const double ratio = base_ratio * weight(m, t + 1 - m) / w;
                if (ratio < 1.0) {
                    bound = w * base * ratio / (1.0 - ratio);
                }
            } else if (base == 0.0 && base_ratio < 1.0 && result.terms_used > 1) {
                // underflowed: every later term underflows too
                bound = 0.0;
            }
            if (bound <= tol) {
                result.value = sum.value();
                result.tail_bound = bound;
                return result;
            }
        }

        // C(l+1, m-1) = C(l, m-1) * (l+1) / (l+2-m), exact.
        coefficient *= ell + 1;
        coefficient /= ell + 2 - m;
        ++ell;
    }
}

/// Sums statistic(boys, girls) over both branches of the stopping time.
template <class Statistic>
SeriesResult sum_statistic(const Rule& rule, BirthProbability p, Statistic&& statistic, WeightShape shape,
                           double tol, const SeriesOptions& options = {}, count_t max_children = 0) {
    const auto boy_last = sum_branch(
        rule.boys(), rule.girls(), p.boy(),
        [&](count_t boys, count_t girls) { return statistic(boys, girls); }, shape, tol / 2, options.term_cap,
        max_children);
    const auto girl_last = sum_branch(
        rule.girls(), rule.boys(), p.girl(),
        [&](count_t girls, count_t boys) { return statistic(boys, girls); }, shape, tol / 2,
        options.term_cap - boy_last.terms_used, max_children);
    return {boy_last.value + girl_last.value, boy_last.tail_bound + girl_last.tail_bound,
            boy_last.terms_used + girl_last.terms_used};
}

inline double as_real(count_t c) { return static_cast<double>(c); }

} // namespace detail

/// B(n,k,p), the expected number of boys at the stopping time.
inline SeriesResult expected_boys(const Rule& rule, BirthProbability p, double tol, const SeriesOptions& options = {}) {
    detail::check_series_inputs(rule, p, tol, "expected_boys");
    return detail::sum_statistic(
        rule, p, [](count_t boys, count_t) { return detail::as_real(boys); }, WeightShape::affine, tol, options);
}

/// G(n,k,p) = B(k,n,1-p).
inline SeriesResult expected_girls(const Rule& rule, BirthProbability p, double tol, const SeriesOptions& options = {}) {
    detail::check_series_inputs(rule, p, tol, "expected_girls");
    return expected_boys(rule.mirrored(), p.mirrored(), tol, options);
}

namespace detail {

/// Girls summed straight from the branch decomposition, without the mirror.
/// Only used to test the mirror identity.
inline SeriesResult expected_girls_direct(const Rule& rule, BirthProbability p, double tol,
                                          const SeriesOptions& options = {}) {
    check_series_inputs(rule, p, tol, "expected_girls");
    return sum_statistic(
        rule, p, [](count_t, count_t girls) { return as_real(girls); }, WeightShape::affine, tol, options);
}

} // namespace detail

/// F(n,k,p) = E(T).
inline SeriesResult expected_family_size(const Rule& rule, BirthProbability p, double tol,
                                         const SeriesOptions& options = {}) {
    detail::check_series_inputs(rule, p, tol, "expected_family_size");
    return detail::sum_statistic(
        rule, p, [](count_t boys, count_t girls) { return detail::as_real(boys + girls); }, WeightShape::affine, tol,
        options);
}

/// B/G. Equals the birth odds p/(1-p) for every rule.
inline double gender_ratio(const Rule& rule, BirthProbability p, double tol, const SeriesOptions& options = {}) {
    const auto boys = expected_boys(rule, p, tol, options);
    const auto girls = expected_girls(rule, p, tol, options);
    return boys.value / girls.value;
}

/// Series cut at T <= max_children, term for term the same as the infinite
/// sums above. Used to compare against the brute-force enumerator.
inline TruncatedExpectations truncated_expectations(const Rule& rule, BirthProbability p, count_t max_children) {
    require_nonempty(rule, "truncated_expectations");
    if (max_children == 0) {
        throw DomainError("truncated_expectations: max_children must be positive");
    }
    constexpr double unused_tol = 1.0;
    const SeriesOptions options{std::numeric_limits<count_t>::max()};
    auto truncated = [&](auto&& statistic) {
        return detail::sum_statistic(rule, p, statistic, WeightShape::affine, unused_tol, options, max_children).value;
    };
    TruncatedExpectations out;
    out.max_children = max_children;
    out.mass_covered = truncated([](count_t, count_t) { return 1.0; });
    out.boys = truncated([](count_t b, count_t) { return detail::as_real(b); });
    out.girls = truncated([](count_t, count_t g) { return detail::as_real(g); });
    out.total = truncated([](count_t b, count_t g) { return detail::as_real(b + g); });
    out.girl_share = truncated([](count_t b, count_t g) { return detail::as_real(g) / detail::as_real(b + g); });
    out.martingale = truncated([&](count_t b, count_t g) { return martingale_value(b, g, p); });
    return out;
}

/// Named closed forms for the one-boy-one-girl rule (1,1) and the two-boys
/// rule (2,0).
enum class ClosedForm {
    hillel_family,  // F_H
    shammai_family, // F_S
    hillel_girls,   // G_H
    shammai_girls,  // G_S
    hillel_boys,    // B_H
    shammai_boys,   // B_S
};

inline double closed_form(ClosedForm quantity, BirthProbability prob) {
    const double p = prob.boy();
    const double hillel = p * p - p + 1.0;
    switch (quantity) {
    case ClosedForm::hillel_family: return hillel / (p - p * p);
    case ClosedForm::shammai_family: return 2.0 / p;
    case ClosedForm::hillel_girls: return hillel / p;
    case ClosedForm::shammai_girls: return 2.0 * (1.0 - p) / p;
    case ClosedForm::hillel_boys: return hillel / (1.0 - p);
    case ClosedForm::shammai_boys: return 2.0;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline std::string_view closed_form_name(ClosedForm quantity) {
    switch (quantity) {
    case ClosedForm::hillel_family: return "F_H";
    case ClosedForm::shammai_family: return "F_S";
    case ClosedForm::hillel_girls: return "G_H";
    case ClosedForm::shammai_girls: return "G_S";
    case ClosedForm::hillel_boys: return "B_H";
    case ClosedForm::shammai_boys: return "B_S";
    }
    return "?";
}

inline ClosedForm parse_closed_form(std::string_view name) {
    for (auto q : {ClosedForm::hillel_family, ClosedForm::shammai_family, ClosedForm::hillel_girls,
                   ClosedForm::shammai_girls, ClosedForm::hillel_boys, ClosedForm::shammai_boys}) {
        if (closed_form_name(q) == name) {
            return q;
        }
    }
    throw DomainError("unknown closed form '" + std::string(name) + "'");
}

} // namespace famplan
