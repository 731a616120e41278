#include "diophant/rational.hpp"

#include <gtest/gtest.h>

namespace diophant {
namespace {

TEST(Rational, CanonicalForm) {
    Rational r(6, 4);
    EXPECT_EQ(r.numerator(), 3);
    EXPECT_EQ(r.denominator(), 2);
    Rational neg(3, -6);
    EXPECT_EQ(neg.numerator(), -1);
    EXPECT_EQ(neg.denominator(), 2);
    EXPECT_EQ(Rational(0, 7), Rational(0));
    EXPECT_EQ(Rational(0).denominator(), 1);
}

TEST(Rational, ZeroDenominatorThrows) {
    EXPECT_THROW(Rational(1, 0), std::domain_error);
    EXPECT_THROW(Rational(0, 5).reciprocal(), std::domain_error);
    EXPECT_THROW(Rational(3) / Rational(0), std::domain_error);
}

TEST(Rational, Arithmetic) {
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
    EXPECT_EQ(Rational(1, 2) - Rational(1, 3), Rational(1, 6));
    EXPECT_EQ(Rational(2, 3) * Rational(3, 4), Rational(1, 2));
    EXPECT_EQ(Rational(2, 3) / Rational(4, 3), Rational(1, 2));
    EXPECT_EQ(-Rational(1, 2), Rational(-1, 2));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_GT(Rational(1, 2), Rational(-1, 2));
}

TEST(Rational, Parse) {
    EXPECT_EQ(Rational::parse("22/7"), Rational(22, 7));
    EXPECT_EQ(Rational::parse("-22/7"), Rational(-22, 7));
    EXPECT_EQ(Rational::parse("42"), Rational(42));
    EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
    EXPECT_EQ(Rational::parse("-1.5"), Rational(-3, 2));
    EXPECT_EQ(Rational::parse("3."), Rational(3));
    EXPECT_FALSE(Rational::parse(""));
    EXPECT_FALSE(Rational::parse("abc"));
    EXPECT_FALSE(Rational::parse("1/0"));
    EXPECT_FALSE(Rational::parse("1.2.3"));
}

TEST(Rational, Render) {
    EXPECT_EQ(Rational(22, 7).str(), "22/7");
    EXPECT_EQ(Rational(-3, 1).str(), "-3");
    EXPECT_EQ(Rational(0).str(), "0");
}

TEST(Rational, DenominatorBits) {
    EXPECT_EQ(Rational(1, 1).den_bits(), 1u);
    EXPECT_EQ(Rational(1, 255).den_bits(), 8u);
    EXPECT_EQ(Rational(1, 256).den_bits(), 9u);
}

TEST(Rational, IntegerBridge) {
    EXPECT_EQ(Rational(mpz_class(10), mpz_class(4)), Rational(5, 2));
    EXPECT_TRUE(Rational(8, 2).is_integer());
    EXPECT_FALSE(Rational(9, 2).is_integer());
    EXPECT_DOUBLE_EQ(Rational(1, 2).to_double(), 0.5);
}

} // namespace
} // namespace diophant
