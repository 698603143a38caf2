#pragma once

// Dense univariate polynomials in p with arbitrary-precision rational
// coefficients.

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "famplan/errors.hpp"

namespace famplan {

using rational = boost::multiprecision::cpp_rational;

/// Coefficients are stored by ascending degree. Trailing zeros are always
/// stripped, so the zero polynomial has no coefficients and structural
/// equality is mathematical equality.
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<rational> coefficients) : coefficients_(std::move(coefficients)) { trim(); }

    Polynomial(std::initializer_list<rational> coefficients) : coefficients_(coefficients) { trim(); }

    static Polynomial constant(rational c) { return Polynomial(std::vector<rational>{std::move(c)}); }

    /// c * p^degree
    static Polynomial monomial(std::size_t degree, rational c = 1) {
        std::vector<rational> coefficients(degree + 1);
        coefficients[degree] = std::move(c);
        return Polynomial(std::move(coefficients));
    }

    /// (a + b p)^exponent
    static Polynomial binomial_power(const rational& a, const rational& b, std::size_t exponent) {
        Polynomial base{a, b};
        Polynomial result = constant(1);
        for (std::size_t i = 0; i < exponent; ++i) {
            result *= base;
        }
        return result;
    }

    bool is_zero() const { return coefficients_.empty(); }

    /// Degree of the zero polynomial is reported as -1.
    long degree() const { return static_cast<long>(coefficients_.size()) - 1; }

    const std::vector<rational>& coefficients() const { return coefficients_; }

    rational coefficient(std::size_t i) const { return i < coefficients_.size() ? coefficients_[i] : rational(0); }

    const rational& leading() const {
        if (is_zero()) {
            throw DomainError("leading coefficient of the zero polynomial");
        }
        return coefficients_.back();
    }

    Polynomial& operator+=(const Polynomial& other) {
        if (other.coefficients_.size() > coefficients_.size()) {
            coefficients_.resize(other.coefficients_.size());
        }
        for (std::size_t i = 0; i < other.coefficients_.size(); ++i) {
            coefficients_[i] += other.coefficients_[i];
        }
        trim();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& other) {
        if (other.coefficients_.size() > coefficients_.size()) {
            coefficients_.resize(other.coefficients_.size());
        }
        for (std::size_t i = 0; i < other.coefficients_.size(); ++i) {
            coefficients_[i] -= other.coefficients_[i];
        }
        trim();
        return *this;
    }

    Polynomial& operator*=(const Polynomial& other) {
        *this = *this * other;
        return *this;
    }

    Polynomial& operator*=(const rational& c) {
        if (c == 0) {
            coefficients_.clear();
            return *this;
        }
        for (auto& x : coefficients_) {
            x *= c;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const rational& c) { return a *= c; }
    friend Polynomial operator*(const rational& c, Polynomial a) { return a *= c; }
    friend Polynomial operator-(Polynomial a) { return a *= rational(-1); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<rational> out(a.coefficients_.size() + b.coefficients_.size() - 1);
        for (std::size_t i = 0; i < a.coefficients_.size(); ++i) {
            if (a.coefficients_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.coefficients_.size(); ++j) {
                out[i + j] += a.coefficients_[i] * b.coefficients_[j];
            }
        }
        return Polynomial(std::move(out));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coefficients_ == b.coefficients_; }

    /// Euclidean division: *this = quotient * divisor + remainder, deg remainder < deg divisor.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const {
        if (divisor.is_zero()) {
            throw DomainError("polynomial division by zero");
        }
        std::vector<rational> remainder = coefficients_;
        const std::size_t dsize = divisor.coefficients_.size();
        if (remainder.size() < dsize) {
            return {Polynomial{}, *this};
        }
        std::vector<rational> quotient(remainder.size() - dsize + 1);
        const rational& lead = divisor.leading();
        for (std::size_t i = remainder.size(); i-- >= dsize;) {
            if (remainder[i] == 0) {
                continue;
            }
            const rational factor = remainder[i] / lead;
            const std::size_t shift = i - (dsize - 1);
            quotient[shift] = factor;
            for (std::size_t j = 0; j < dsize; ++j) {
                remainder[shift + j] -= factor * divisor.coefficients_[j];
            }
        }
        return {Polynomial(std::move(quotient)), Polynomial(std::move(remainder))};
    }

    /// Scaled to leading coefficient one. The zero polynomial stays zero.
    Polynomial monic() const {
        if (is_zero()) {
            return {};
        }
        return *this * (rational(1) / leading());
    }

    Polynomial derivative() const {
        if (coefficients_.size() <= 1) {
            return {};
        }
        std::vector<rational> out(coefficients_.size() - 1);
        for (std::size_t i = 1; i < coefficients_.size(); ++i) {
            out[i - 1] = coefficients_[i] * static_cast<long>(i);
        }
        return Polynomial(std::move(out));
    }

    /// f(1 - p)
    Polynomial reflected() const {
        const Polynomial one_minus_p{1, -1};
        Polynomial result;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
            result = result * one_minus_p + constant(*it);
        }
        return result;
    }

    rational evaluate(const rational& p) const {
        rational result = 0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
            result = result * p + *it;
        }
        return result;
    }

    double evaluate(double p) const {
        double result = 0.0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
            result = result * p + it->convert_to<double>();
        }
        return result;
    }

    /// Human-readable form such as "2*p^3 - p + 1/2".
    std::string to_string() const {
        if (is_zero()) {
            return "0";
        }
        std::string out;
        for (std::size_t i = coefficients_.size(); i-- > 0;) {
            const rational& c = coefficients_[i];
            if (c == 0) {
                continue;
            }
            const bool negative = c < 0;
            const rational magnitude = negative ? rational(-c) : c;
            if (out.empty()) {
                out += negative ? "-" : "";
            } else {
                out += negative ? " - " : " + ";
            }
            const bool unit = magnitude == 1;
            if (i == 0 || !unit) {
                out += magnitude.str();
            }
            if (i > 0) {
                out += unit ? "p" : "*p";
                if (i > 1) {
                    out += "^" + std::to_string(i);
                }
            }
        }
        return out;
    }

private:
    void trim() {
        while (!coefficients_.empty() && coefficients_.back() == 0) {
            coefficients_.pop_back();
        }
    }

    std::vector<rational> coefficients_;
};

/// Monic greatest common divisor over the rationals (Euclid's algorithm).
/// gcd(0, 0) is 0.
inline Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
        auto remainder = a.divmod(b).second;
        a = std::move(b);
        b = remainder.monic();
    }
    return a.monic();
}

} // namespace famplan
