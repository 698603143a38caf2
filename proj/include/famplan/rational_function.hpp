#pragma once

#include <string>
#include <utility>

#include "famplan/polynomial.hpp"

namespace famplan {

/// numerator / denominator in lowest terms with a monic denominator. Two
/// rational functions are equal iff their canonical parts are equal.
class RationalFunction {
public:
    RationalFunction() : denominator_(Polynomial::constant(1)) {}

    explicit RationalFunction(Polynomial numerator)
        : numerator_(std::move(numerator)), denominator_(Polynomial::constant(1)) {}

    RationalFunction(Polynomial numerator, Polynomial denominator)
        : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
        canonicalize();
    }

    static RationalFunction constant(const rational& c) { return RationalFunction(Polynomial::constant(c)); }

    const Polynomial& numerator() const { return numerator_; }
    const Polynomial& denominator() const { return denominator_; }

    bool is_zero() const { return numerator_.is_zero(); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return {a.numerator_ * b.denominator_ + b.numerator_ * a.denominator_, a.denominator_ * b.denominator_};
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return {a.numerator_ * b.denominator_ - b.numerator_ * a.denominator_, a.denominator_ * b.denominator_};
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return {a.numerator_ * b.numerator_, a.denominator_ * b.denominator_};
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) {
            throw DomainError("division by the zero rational function");
        }
        return {a.numerator_ * b.denominator_, a.denominator_ * b.numerator_};
    }
    friend RationalFunction operator*(const rational& c, const RationalFunction& f) {
        return {f.numerator_ * c, f.denominator_};
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.numerator_ == b.numerator_ && a.denominator_ == b.denominator_;
    }

    /// First derivative by the quotient rule.
    RationalFunction derivative() const {
        return {numerator_.derivative() * denominator_ - numerator_ * denominator_.derivative(),
                denominator_ * denominator_};
    }

    /// "(num)/(den)" with both polynomials scaled to coprime integer
    /// coefficients and a positive leading denominator coefficient.
    std::string to_string() const {
        using boost::multiprecision::cpp_int;
        cpp_int scale = 1;
        for (const auto* poly : {&numerator_, &denominator_}) {
            for (const auto& c : poly->coefficients()) {
                scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(c));
            }
        }
        cpp_int content = 0;
        for (const auto* poly : {&numerator_, &denominator_}) {
            for (const auto& c : poly->coefficients()) {
                const cpp_int scaled = boost::multiprecision::numerator(c) * (scale / boost::multiprecision::denominator(c));
                content = boost::multiprecision::gcd(content, scaled);
            }
        }
        const rational factor = rational(scale) / rational(content);
        return "(" + (numerator_ * factor).to_string() + ")/(" + (denominator_ * factor).to_string() + ")";
    }

private:
    void canonicalize() {
        if (denominator_.is_zero()) {
            throw DomainError("rational function with zero denominator");
        }
        if (numerator_.is_zero()) {
            denominator_ = Polynomial::constant(1);
            return;
        }
        const Polynomial common = gcd(numerator_, denominator_);
        if (common.degree() > 0) {
            numerator_ = numerator_.divmod(common).first;
            denominator_ = denominator_.divmod(common).first;
        }
        const rational lead = denominator_.leading();
        if (lead != 1) {
            numerator_ *= rational(1) / lead;
            denominator_ *= rational(1) / lead;
        }
    }

    Polynomial numerator_;
    Polynomial denominator_;
};

} // namespace famplan
