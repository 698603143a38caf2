#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "famplan/series.hpp"
#include "famplan/symbolic.hpp"

using namespace famplan;

namespace {

const Polynomial p_poly = Polynomial::monomial(1);
const Polynomial one_minus_p{1, -1};

RationalFunction rf(Polynomial num, Polynomial den = Polynomial::constant(1)) {
    return {std::move(num), std::move(den)};
}

/// First `terms` Taylor coefficients at p = 0 of num/den, by power-series
/// long division (den(0) != 0).
std::vector<rational> taylor(const RationalFunction& f, std::size_t terms) {
    const auto& num = f.numerator();
    const auto& den = f.denominator();
    std::vector<rational> out(terms);
    const rational d0 = den.coefficient(0);
    for (std::size_t i = 0; i < terms; ++i) {
        rational acc = num.coefficient(i);
        for (std::size_t j = 1; j <= i; ++j) {
            acc -= den.coefficient(j) * out[i - j];
        }
        out[i] = acc / d0;
    }
    return out;
}

Polynomial random_polynomial(std::mt19937_64& gen, int max_degree = 6) {
    std::uniform_int_distribution<int> coefficient(-9, 9);
    std::uniform_int_distribution<int> degree(0, max_degree);
    std::vector<rational> c(degree(gen) + 1);
    for (auto& x : c) {
        x = coefficient(gen);
    }
    return Polynomial(std::move(c));
}

Polynomial random_nonzero(std::mt19937_64& gen) {
    for (;;) {
        auto poly = random_polynomial(gen, 4);
        if (!poly.is_zero()) {
            return poly;
        }
    }
}

} // namespace

TEST(Polynomial, CanonicalTrimming) {
    EXPECT_TRUE(Polynomial({0, 0, 0}).is_zero());
    EXPECT_EQ(Polynomial({1, 2, 0}).degree(), 1);
    EXPECT_EQ(Polynomial().degree(), -1);
    EXPECT_EQ((Polynomial{1, 1} - Polynomial{1, 1}).coefficients().size(), 0u);
    EXPECT_EQ(Polynomial({rational(1, 2), -1, 2}).to_string(), "2*p^2 - p + 1/2");
}

TEST(Polynomial, DivisionAndGcd) {
    const Polynomial a = Polynomial{-1, 0, 1}; // p^2 - 1
    const Polynomial b = Polynomial{1, 1};     // p + 1
    const auto [q, r] = a.divmod(b);
    EXPECT_EQ(q, (Polynomial{-1, 1}));
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(gcd(a, Polynomial{2, 2}), b);
    EXPECT_EQ(gcd(Polynomial{1, 1}, Polynomial{-1, 1}), Polynomial::constant(1));
    EXPECT_THROW(a.divmod(Polynomial{}), DomainError);
}

TEST(RationalFunction, CanonicalForm) {
    // (2p^2 - 2) / (4p + 4) = (p - 1)/2
    const auto f = rf(Polynomial{-2, 0, 2}, Polynomial{4, 4});
    EXPECT_EQ(f.numerator(), (Polynomial{rational(-1, 2), rational(1, 2)}));
    EXPECT_EQ(f.denominator(), Polynomial::constant(1));
    EXPECT_THROW(rf(Polynomial{1}, Polynomial{}), DomainError);
    EXPECT_TRUE(rf(Polynomial{}, Polynomial{3, 1}).denominator() == Polynomial::constant(1));
}

TEST(Differentiate, Examples) {
    const auto odds = rf(p_poly, one_minus_p);
    EXPECT_EQ(differentiate(odds, 1), rf(Polynomial::constant(1), one_minus_p * one_minus_p));
    EXPECT_EQ(differentiate(odds, 0), odds);
}

TEST(Differentiate, SecondDerivativeMatchesSeriesExpansion) {
    // p^3/(1-p) = sum_{l>=3} p^l, so its second derivative is
    // sum_{l>=3} l(l-1) p^(l-2).
    const auto f = differentiate(rf(Polynomial::monomial(3), one_minus_p), 2);
    const auto coefficients = taylor(f, 31);
    for (std::size_t degree = 0; degree <= 30; ++degree) {
        const long l = static_cast<long>(degree) + 2;
        const rational expected = l >= 3 ? rational(l * (l - 1)) : rational(0);
        EXPECT_EQ(coefficients[degree], expected) << "degree " << degree;
    }
}

TEST(Differentiate, LinearityAndProductRule) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = rf(random_polynomial(gen), random_nonzero(gen));
        const auto g = rf(random_polynomial(gen), random_nonzero(gen));
        const rational a = static_cast<long>(gen() % 19) - 9;
        EXPECT_EQ((a * f + g).derivative(), a * f.derivative() + g.derivative());
        EXPECT_EQ((f * g).derivative(), f.derivative() * g + f * g.derivative());
    }
}

TEST(RationalFunction, CanonicalizationIsIdempotentAndCoprime) {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = rf(random_polynomial(gen), random_nonzero(gen));
        const auto g = rf(random_polynomial(gen), random_nonzero(gen));
        for (const auto& h : {f, f * g, f - g, f.derivative(), mirror(f)}) {
            EXPECT_EQ(RationalFunction(h.numerator(), h.denominator()), h);
            if (!h.is_zero()) {
                EXPECT_EQ(gcd(h.numerator(), h.denominator()), Polynomial::constant(1));
            }
            EXPECT_EQ(h.denominator().leading(), 1);
        }
    }
}

TEST(ExpectedBoysExact, Anchors) {
    EXPECT_EQ(expected_boys_exact(0, 1), rf(p_poly, one_minus_p));
    EXPECT_EQ(expected_boys_exact(1, 1), rf(Polynomial{1, -1, 1}, one_minus_p));
    EXPECT_EQ(expected_boys_exact(2, 0), RationalFunction::constant(2));
    EXPECT_EQ(expected_boys_exact(1, 0), RationalFunction::constant(1));
}

TEST(ExpectedBoysExact, Errors) {
    EXPECT_THROW(expected_boys_exact(0, 0), DomainError);
    EXPECT_THROW(expected_boys_exact(13, 1), DomainError);
    EXPECT_NO_THROW(expected_boys_exact(13, 1, 13));
}

TEST(Mirror, Examples) {
    EXPECT_EQ(mirror(rf(p_poly, one_minus_p)), rf(one_minus_p, p_poly));
    EXPECT_EQ(mirror(RationalFunction::constant(2)), RationalFunction::constant(2));
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = rf(random_polynomial(gen), random_nonzero(gen));
        EXPECT_EQ(mirror(mirror(f)), f);
    }
}

TEST(VerifyRatioIdentity, HillelAndShammai) {
    const auto hillel = verify_ratio_identity(1, 1);
    EXPECT_TRUE(hillel.holds);
    EXPECT_EQ(hillel.expected_boys, rf(Polynomial{1, -1, 1}, one_minus_p));
    EXPECT_EQ(hillel.expected_girls, rf(Polynomial{1, -1, 1}, p_poly));
    EXPECT_TRUE(verify_ratio_identity(2, 0).holds);
    EXPECT_THROW(verify_ratio_identity(0, 0), DomainError);
}

TEST(VerifyRatioIdentity, AllRulesUpToEight) {
    const auto certificates = verify_ratio_grid(8, 8);
    EXPECT_EQ(certificates.size(), 80u);
    for (const auto& c : certificates) {
        EXPECT_TRUE(c.holds) << "(" << c.boys_required << "," << c.girls_required << ")";
        EXPECT_EQ(c.lhs, c.rhs);
    }
}

TEST(EvaluateExact, ValuesPolesAndDomain) {
    const rational half(1, 2);
    EXPECT_EQ(evaluate_exact(expected_boys_exact(1, 1), half), rational(3, 2));
    EXPECT_EQ(evaluate_exact(rf(p_poly, one_minus_p), half), 1);
    EXPECT_EQ(evaluate_exact(expected_boys_exact(3, 2), rational(1, 3)), rational(83, 27));
    EXPECT_THROW(evaluate_exact(rf(Polynomial::constant(1), Polynomial{-1, 2}), half), PoleError);
    EXPECT_THROW(evaluate_exact(rf(p_poly), rational(3, 2)), DomainError);
}

TEST(EvaluateExact, AgreesWithSeries) {
    for (count_t n = 0; n <= 6; ++n) {
        for (count_t k = 0; k <= 6; ++k) {
            if (n + k == 0) {
                continue;
            }
            const auto exact = expected_boys_exact(n, k);
            for (int j = 1; j <= 9; ++j) {
                const rational p(j, 10);
                const double series = expected_boys(Rule(n, k), BirthProbability(j / 10.0), 1e-12).value;
                EXPECT_NEAR(evaluate_exact(exact, p).convert_to<double>(), series, 1e-9)
                    << "(" << n << "," << k << ") p=" << j << "/10";
            }
        }
    }
}

TEST(Certificate, TextForm) {
    const auto text = expected_boys_exact(1, 1).to_string();
    EXPECT_EQ(text, "(-p^2 + p - 1)/(p - 1)");
    EXPECT_EQ(RationalFunction(Polynomial{rational(1, 2), rational(1, 3)}, Polynomial{rational(5, 1)}).to_string(),
              "(2*p + 3)/(30)");
}
