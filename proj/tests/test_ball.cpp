#include "diophant/ball.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

namespace diophant {
namespace {

Precision P256 = Precision::of_bits(256);

// 50 fractional digits of pi, correctly rounded.
const char* kPi50 = "3.14159265358979323846264338327950288419716939937511";

Rational pow10_recip(int k) {
    return Rational(mpz_class(1), mpz_class("1" + std::string(k, '0')));
}

TEST(Precision, Validation) {
    EXPECT_THROW(Precision::of_bits(32), std::domain_error);
    EXPECT_EQ(Precision::of_bits(256).bits, 256);
    EXPECT_EQ(Precision::of_bits(256).decimal_digits(), 77);
}

TEST(Ball, ExactConstruction) {
    Ball z(P256);
    EXPECT_TRUE(z.is_exact_zero());
    Ball one = Ball::of_int(1L, P256);
    EXPECT_TRUE(one.is_exact());
    EXPECT_TRUE(one.contains(Rational(1)));
    EXPECT_FALSE(one.contains(Rational(2)));
    Ball dyadic = Ball::of_rational(Rational(3, 8), P256);
    EXPECT_TRUE(dyadic.is_exact()); // dyadic fits the binary midpoint
    Ball third = Ball::of_rational(Rational(1, 3), P256);
    EXPECT_FALSE(third.is_exact());
    EXPECT_TRUE(third.contains(Rational(1, 3)));
}

TEST(Ball, PiFiftyDigits) {
    Ball pi = Ball::pi(P256);
    auto d = pi.decimal_digits(50);
    EXPECT_EQ(d.text, kPi50);
    EXPECT_GE(d.certified, 50);
    // containment against the decimal oracle, independent of rendering
    Rational oracle = *Rational::parse(kPi50);
    Ball gap = pi.sub_rational(oracle).abs();
    EXPECT_EQ(gap.less_than(pow10_recip(50)), Tri::yes);
}

TEST(Ball, DecimalCertification) {
    Ball half = Ball::of_rational_with_radius(Rational(1, 2), pow10_recip(20), P256);
    auto h = half.decimal_digits(3);
    EXPECT_EQ(h.text, "0.500");
    EXPECT_EQ(h.certified, 3);
    Ball wide = Ball::of_rational_with_radius(Rational(1), Rational(3, 5), P256);
    EXPECT_EQ(wide.decimal_digits(3).certified, 0);
    EXPECT_THROW(half.decimal_digits(0), std::domain_error);
}

TEST(Ball, ArithmeticEnclosure) {
    // random dyadic pairs: exact rational arithmetic must stay inside
    std::mt19937_64 rng(20260815);
    for (int i = 0; i < 200; ++i) {
        long na = static_cast<long>(rng() % 2000) - 1000;
        long nb = static_cast<long>(rng() % 2000) - 1000;
        int ea = static_cast<int>(rng() % 12);
        int eb = static_cast<int>(rng() % 12);
        Rational a(na, 1L << ea), b(nb, 1L << eb);
        Ball ba = Ball::of_rational(a, P256), bb = Ball::of_rational(b, P256);
        EXPECT_TRUE((ba + bb).contains(a + b));
        EXPECT_TRUE((ba - bb).contains(a - b));
        EXPECT_TRUE((ba * bb).contains(a * b));
        if (b.sign() != 0) EXPECT_TRUE((ba / bb).contains(a / b));
    }
}

TEST(Ball, DivisionGuards) {
    Ball pi = Ball::pi(P256);
    Ball straddle = Ball::of_rational_with_radius(Rational(0), Rational(1, 10), P256);
    EXPECT_THROW(pi / straddle, PrecisionExhausted);
    EXPECT_THROW(pi / Ball::of_int(0L, P256), std::domain_error);
    Ball y = (pi * pi) / pi;
    EXPECT_EQ(Ball::less((y - pi).abs(), Ball::of_rational(Rational(1, 1000000), P256)),
              Tri::yes);
}

TEST(Ball, SqrtAndLog) {
    Ball two = Ball::of_int(2L, P256);
    Ball s = two.sqrt();
    EXPECT_TRUE((s * s).contains(Rational(2)));
    EXPECT_THROW(Ball::of_int(-1L, P256).sqrt(), std::domain_error);
    Ball e1 = two.log();
    // ln 2 = 0.6931...
    EXPECT_EQ(e1.less_than(Rational(6932, 10000)), Tri::yes);
    EXPECT_EQ(e1.greater_than(Rational(6931, 10000)), Tri::yes);
    EXPECT_THROW(Ball::of_int(0L, P256).log(), std::domain_error);
    Ball touching = Ball::of_rational_with_radius(Rational(1, 100), Rational(1, 100), P256);
    EXPECT_THROW(touching.log(), PrecisionExhausted);
}

TEST(Ball, AbsStraddle) {
    Ball m = Ball::of_rational_with_radius(Rational(-1, 100), Rational(1, 10), P256);
    Ball a = m.abs();
    EXPECT_TRUE(a.contains(Rational(0)));
    EXPECT_TRUE(a.contains(Rational(11, 100)));
    EXPECT_EQ(a.less_than(Rational(12, 100)), Tri::yes);
}

TEST(Ball, PowUi) {
    Ball three = Ball::of_int(3L, P256);
    EXPECT_TRUE(three.pow_ui(0).contains(Rational(1)));
    EXPECT_TRUE(three.pow_ui(7).contains(Rational(2187)));
    Ball pi = Ball::pi(P256);
    EXPECT_TRUE(pi.pow_ui(2).overlaps(pi * pi));
}

TEST(Ball, Comparisons) {
    Ball pi = Ball::pi(P256);
    EXPECT_EQ(pi.less_than(Rational(22, 7)), Tri::yes);
    EXPECT_EQ(pi.greater_than(Rational(311, 99)), Tri::yes);
    EXPECT_EQ(pi.less_than(Rational(3)), Tri::no);
    Ball wide = Ball::of_rational_with_radius(Rational(3), Rational(1), P256);
    EXPECT_EQ(wide.less_than(Rational(7, 2)), Tri::undecided);
    EXPECT_EQ(Ball::less(Ball::of_int(1L, P256), Ball::of_int(2L, P256)), Tri::yes);
    EXPECT_EQ(Ball::less(Ball::of_int(2L, P256), Ball::of_int(1L, P256)), Tri::no);
}

TEST(Ball, CertifiedFloor) {
    EXPECT_EQ(*Ball::of_rational(Rational(7, 2), P256).certified_floor(), 3);
    EXPECT_EQ(*Ball::of_int(-5L, P256).certified_floor(), -5);
    EXPECT_EQ(*Ball::of_rational(Rational(-7, 2), P256).certified_floor(), -4);
    // a ball straddling an integer cannot certify its floor
    Ball near7 = Ball::of_rational_with_radius(Rational(7), Rational(1, 1000), P256);
    EXPECT_FALSE(near7.certified_floor().has_value());
}

TEST(Ball, RationalHelpers) {
    Ball pi = Ball::pi(P256);
    Ball shifted = pi.sub_rational(Rational(3));
    EXPECT_EQ(shifted.less_than(Rational(15, 100)), Tri::yes);
    Ball scaled = pi.mul_rational(Rational(2));
    EXPECT_TRUE(scaled.overlaps(pi + pi));
    Ball back = pi.add_rational(Rational(-3));
    EXPECT_TRUE(back.overlaps(shifted));
}

TEST(Ball, AtPrecisionKeepsContainment) {
    Ball pi = Ball::pi(Precision::of_bits(512));
    Ball down = pi.at_precision(P256);
    Rational oracle = *Rational::parse(kPi50);
    EXPECT_EQ(down.sub_rational(oracle).abs().less_than(pow10_recip(50)), Tri::yes);
}

TEST(Ball, IntervalConstruction) {
    detail::Mpfr lo(256), hi(256);
    mpfr_set_d(lo, 1.25, MPFR_RNDN);
    mpfr_set_d(hi, 1.75, MPFR_RNDN);
    Ball b = Ball::of_interval(lo, hi, P256);
    EXPECT_TRUE(b.contains(Rational(3, 2)));
    EXPECT_TRUE(b.contains(Rational(5, 4)));
    EXPECT_FALSE(b.contains(Rational(2)));
    mpfr_set_d(hi, 1.0, MPFR_RNDN);
    EXPECT_THROW(Ball::of_interval(lo, hi, P256), std::domain_error);
}

} // namespace
} // namespace diophant
