#pragma once

// Stopping rules of the form "keep having children until at least n boys and
// k girls have been born", the exact distribution of the stopping time and
// the shared bundle type used to compare truncated expectations.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "famplan/errors.hpp"

namespace famplan {

using count_t = std::uint64_t;
using big_int = boost::multiprecision::cpp_int;

class Rule {
public:
    constexpr Rule() = default;
    constexpr Rule(count_t boys_required, count_t girls_required)
        : boys_(boys_required), girls_(girls_required) {}

    constexpr count_t boys() const { return boys_; }
    constexpr count_t girls() const { return girls_; }
    constexpr count_t children_required() const { return boys_ + girls_; }

    /// The (0,0) rule stops before the first birth.
    constexpr bool is_empty() const { return boys_ == 0 && girls_ == 0; }

    /// Same rule with the roles of boys and girls exchanged.
    constexpr Rule mirrored() const { return Rule(girls_, boys_); }

    constexpr bool satisfied_by(count_t boys, count_t girls) const {
        return boys >= boys_ && girls >= girls_;
    }

    friend constexpr bool operator==(const Rule&, const Rule&) = default;

    std::string to_string() const {
        return "(" + std::to_string(boys_) + "," + std::to_string(girls_) + ")";
    }

private:
    count_t boys_ = 0;
    count_t girls_ = 0;
};

/// Rejects the (0,0) rule for operations whose result is an expectation or a
/// ratio of expectations.
inline void require_nonempty(const Rule& rule, const char* operation) {
    if (rule.is_empty()) {
        throw DomainError(std::string(operation) + ": the (0,0) rule stops immediately and has no defined expectations");
    }
}

/// Probability that a single birth is a boy. Strictly inside (0,1).
class BirthProbability {
public:
    explicit BirthProbability(double p) : p_(p) {
        if (!(p > 0.0 && p < 1.0)) {
            throw DomainError("birth probability must lie strictly inside (0,1), got " + std::to_string(p));
        }
    }

    double boy() const { return p_; }
    double girl() const { return 1.0 - p_; }
    double value() const { return p_; }

    /// Birth odds p/(1-p).
    double odds() const { return p_ / (1.0 - p_); }

    BirthProbability mirrored() const { return BirthProbability(1.0 - p_); }

private:
    double p_;
};

/// One terminal configuration of the stopping time.
struct StoppingOutcome {
    count_t total_children = 0;
    count_t boys = 0;
    count_t girls = 0;
    bool last_is_boy = false;
};

/// Probability-weighted statistics over every outcome with T <= max_children.
/// Produced by the brute-force enumerator and by the truncated series so the
/// two can be compared directly.
struct TruncatedExpectations {
    count_t max_children = 0;
    double mass_covered = 0.0;
    double boys = 0.0;
    double girls = 0.0;
    double total = 0.0;
    double girl_share = 0.0;
    double martingale = 0.0;
};

/// Exact binomial coefficient C(n, r); zero when r > n.
inline big_int binomial_exact(count_t n, count_t r) {
    if (r > n) {
        return 0;
    }
    if (r > n - r) {
        r = n - r;
    }
    big_int c = 1;
    for (count_t i = 1; i <= r; ++i) {
        c *= n - r + i;
        c /= i;
    }
    return c;
}

/// coefficient * base^exponent * other^other_exponent, with the exact integer
/// coefficient converted to floating point only at the end. Falls back to the
/// log domain when the coefficient alone exceeds double range.
inline double scaled_power_product(const big_int& coefficient, double base, count_t exponent,
                                   double other, count_t other_exponent) {
    if (coefficient == 0) {
        return 0.0;
    }
    const auto bits = boost::multiprecision::msb(coefficient);
    if (bits < 900) {
        const double c = coefficient.convert_to<double>();
        const double tail = std::pow(base, static_cast<double>(exponent)) *
                            std::pow(other, static_cast<double>(other_exponent));
        if (tail > 1e-280) {
            return c * tail;
        }
    }
    const auto shift = bits > 60 ? bits - 60 : 0;
    const big_int top = coefficient >> shift;
    const double log_c = std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
    return std::exp(log_c + static_cast<double>(exponent) * std::log(base) +
                    static_cast<double>(other_exponent) * std::log(other));
}

/// Smallest possible stopping time, max(n+k, 1).
inline count_t pmf_support_min(const Rule& rule) {
    require_nonempty(rule, "pmf_support_min");
    return rule.children_required();
}

/// P(T = t and the t-th child is a boy). The boy-last branch needs n >= 1.
inline double boy_last_probability(const Rule& rule, BirthProbability p, count_t total_children) {
    const count_t n = rule.boys();
    if (n == 0 || total_children < rule.children_required()) {
        return 0.0;
    }
    const count_t ell = total_children - 1;
    return scaled_power_product(binomial_exact(ell, n - 1), p.boy(), n, p.girl(), total_children - n);
}

/// P(T = t and the t-th child is a girl). The girl-last branch needs k >= 1.
inline double girl_last_probability(const Rule& rule, BirthProbability p, count_t total_children) {
    return boy_last_probability(rule.mirrored(), p.mirrored(), total_children);
}

/// P(T = total_children) for the given rule.
inline double stopping_pmf(const Rule& rule, BirthProbability p, count_t total_children) {
    require_nonempty(rule, "stopping_pmf");
    if (total_children == 0) {
        throw DomainError("stopping_pmf: total_children must be positive");
    }
    return boy_last_probability(rule, p, total_children) + girl_last_probability(rule, p, total_children);
}

/// X_T = boys/p - girls/(1-p), the martingale stopped at T.
inline double martingale_value(count_t boys, count_t girls, BirthProbability p) {
    return static_cast<double>(boys) / p.boy() - static_cast<double>(girls) / p.girl();
}

} // namespace famplan
