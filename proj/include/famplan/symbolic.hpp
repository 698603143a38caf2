#pragma once

// Exact closed forms for the expected number of boys as rational functions of
// p, and an exact certificate that (1-p) B(n,k,p) = p B(k,n,1-p).
//
// The boy-last branch sums falling factorials in q = 1-p, which are
// derivatives of the geometric tail q^(n+k-1)/(1-q); the girl-last branch is
// the same in p. This gives
//
//   B(n,k,p) = n/(n-1)! p^n (-1)^(n-1) D^(n-1)[(1-p)^(n+k-1) / p]
//            + p (1-p)^k/(k-1)! D^k[p^(n+k-1) / (1-p)],
//
// with the first addend dropped for n = 0 and the second for k = 0.

#include <string>
#include <vector>

#include "famplan/core.hpp"
#include "famplan/rational_function.hpp"

namespace famplan {

inline constexpr count_t default_symbolic_cap = 12;

/// order-th derivative, canonicalized after every step.
inline RationalFunction differentiate(const RationalFunction& f, count_t order) {
    RationalFunction result = f;
    for (count_t i = 0; i < order; ++i) {
        result = result.derivative();
    }
    return result;
}

/// f(1 - p)
inline RationalFunction mirror(const RationalFunction& f) {
    return {f.numerator().reflected(), f.denominator().reflected()};
}

inline rational factorial(count_t n) {
    big_int result = 1;
    for (count_t i = 2; i <= n; ++i) {
        result *= i;
    }
    return rational(result);
}

namespace detail {

inline void check_symbolic_rule(count_t n, count_t k, count_t cap, const char* operation) {
    require_nonempty(Rule(n, k), operation);
    if (n > cap || k > cap) {
        throw DomainError(std::string(operation) + ": n and k must not exceed the symbolic cap of " +
                          std::to_string(cap) + ", got (" + std::to_string(n) + "," + std::to_string(k) + ")");
    }
}

} // namespace detail

/// B(n,k,p) as an exact rational function of p.
inline RationalFunction expected_boys_exact(count_t n, count_t k, count_t cap = default_symbolic_cap) {
    detail::check_symbolic_rule(n, k, cap, "expected_boys_exact");
    const count_t exponent = n + k - 1;
    const Polynomial p = Polynomial::monomial(1);
    const Polynomial one_minus_p{1, -1};
    RationalFunction result;
    if (n > 0) {
        const RationalFunction tail(Polynomial::binomial_power(1, -1, exponent), p);
        const rational sign = (n - 1) % 2 == 0 ? 1 : -1;
        const rational scale = sign * rational(static_cast<long>(n)) / factorial(n - 1);
        result = result + scale * (RationalFunction(Polynomial::monomial(n)) * differentiate(tail, n - 1));
    }
    if (k > 0) {
        const RationalFunction tail(Polynomial::monomial(exponent), one_minus_p);
        const RationalFunction prefactor(p * Polynomial::binomial_power(1, -1, k));
        result = result + (rational(1) / factorial(k - 1)) * (prefactor * differentiate(tail, k));
    }
    return result;
}

/// Audit record for one rule: both sides of (1-p) B(n,k,p) = p B(k,n,1-p).
struct RatioCertificate {
    count_t boys_required = 0;
    count_t girls_required = 0;
    RationalFunction expected_boys;  // B(n,k,p)
    RationalFunction expected_girls; // G(n,k,p) = B(k,n,1-p)
    RationalFunction lhs;            // (1-p) B(n,k,p)
    RationalFunction rhs;            // p G(n,k,p)
    bool holds = false;
};

/// Checks the identity exactly: the difference of both sides must canonicalize
/// to the zero rational function.
inline RatioCertificate verify_ratio_identity(count_t n, count_t k, count_t cap = default_symbolic_cap) {
    detail::check_symbolic_rule(n, k, cap, "verify_ratio_identity");
    RatioCertificate cert;
    cert.boys_required = n;
    cert.girls_required = k;
    cert.expected_boys = expected_boys_exact(n, k, cap);
    cert.expected_girls = mirror(expected_boys_exact(k, n, cap));
    cert.lhs = RationalFunction(Polynomial{1, -1}) * cert.expected_boys;
    cert.rhs = RationalFunction(Polynomial::monomial(1)) * cert.expected_girls;
    cert.holds = (cert.lhs - cert.rhs).is_zero();
    return cert;
}

/// Certificates for every rule with n <= max_n, k <= max_k except (0,0),
/// ordered by n then k.
inline std::vector<RatioCertificate> verify_ratio_grid(count_t max_n, count_t max_k,
                                                       count_t cap = default_symbolic_cap) {
    if (max_n > cap || max_k > cap) {
        throw DomainError("verify: max-n and max-k must not exceed the symbolic cap of " + std::to_string(cap));
    }
    std::vector<RatioCertificate> out;
    for (count_t n = 0; n <= max_n; ++n) {
        for (count_t k = 0; k <= max_k; ++k) {
            if (n + k > 0) {
                out.push_back(verify_ratio_identity(n, k, cap));
            }
        }
    }
    return out;
}

/// Exact value of f at a rational point inside (0,1).
inline rational evaluate_exact(const RationalFunction& f, const rational& p) {
    if (!(p > 0 && p < 1)) {
        throw DomainError("evaluate_exact: p must lie strictly inside (0,1), got " + p.str());
    }
    const rational den = f.denominator().evaluate(p);
    if (den == 0) {
        throw PoleError("evaluate_exact: pole at p = " + p.str());
    }
    return f.numerator().evaluate(p) / den;
}

} // namespace famplan
