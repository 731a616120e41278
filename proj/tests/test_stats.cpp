// Tests for arithmetic statistics: the divisor-count sieve and its
// hyperbola-method check value, coincidence densities across residue pairs,
// 64-bit and multiprecision primality/factoring, per-convergent factor
// profiles with certified lower-bound verdicts, and growth-exponent fits.
#include "diophant/stats.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <random>

namespace {

using diophant::Ball;
using diophant::ContinuedFraction;
using diophant::Precision;
using diophant::Rational;
using diophant::Tri;

TEST(Stats, DivisorSieveSmallValues) {
    auto t = diophant::divisor_sieve(10000);
    unsigned long want[10] = {1, 2, 2, 3, 2, 4, 2, 4, 3, 4};
    for (unsigned long n = 1; n <= 10; ++n) EXPECT_EQ(t.d(n), want[n - 1]) << n;
    EXPECT_EQ(t.d(9973), 2u); // prime
    EXPECT_EQ(t.d(9972), 18u); // 2^2 * 3^2 * 277
    EXPECT_THROW(t.d(0), std::out_of_range);
    EXPECT_THROW(t.d(10001), std::out_of_range);
    EXPECT_THROW(diophant::divisor_sieve(0), std::domain_error);
    EXPECT_THROW(diophant::divisor_sieve(1000, 100), diophant::ResourceCapExceeded);
}

TEST(Stats, SieveMatchesHyperbolaSum) {
    auto t = diophant::divisor_sieve(10000);
    mpz_class direct(0);
    for (unsigned long n = 1; n <= 10000; ++n) direct += t.d(n);
    EXPECT_EQ(direct, diophant::divisor_sum_hyperbola(10000));
    EXPECT_EQ(diophant::divisor_sum_hyperbola(1000), 7069);
}

TEST(Stats, SieveMatchesTrialDivision) {
    auto t = diophant::divisor_sieve(20000);
    std::mt19937_64 rng(20260815);
    for (int i = 0; i < 300; ++i) {
        unsigned long n = rng() % 20000 + 1;
        unsigned long count = 0;
        for (unsigned long d = 1; d * d <= n; ++d)
            if (n % d == 0) count += (d * d == n) ? 1 : 2;
        EXPECT_EQ(t.d(n), count) << n;
    }
}

TEST(Stats, CoincidenceDensity) {
    auto series = diophant::coincidence_density(1000, {100, 250});
    ASSERT_EQ(series.points.size(), 3u);
    EXPECT_EQ(series.points[0].limit, 100u);
    EXPECT_EQ(series.points[0].density, Rational(23, 100));
    EXPECT_EQ(series.points[1].density, Rational(28, 125));
    EXPECT_EQ(series.points[2].limit, 1000u);
    EXPECT_EQ(series.points[2].density, Rational(57, 250));
    EXPECT_EQ(series.points[2].hits, 228u);
    // n = 1 belongs to the set: d(5) = d(7) = 2
    ASSERT_GE(series.first_members.size(), 5u);
    EXPECT_EQ(series.first_members[0], 1u);
    EXPECT_EQ(series.first_members[1], 4u);
    EXPECT_EQ(series.first_members[2], 7u);
    EXPECT_EQ(series.first_members[3], 8u);
    EXPECT_EQ(series.first_members[4], 10u);
}

TEST(Stats, CoincidenceGridNormalization) {
    // duplicates collapse, zero drops, beyond-limit clips, limit is appended
    auto series = diophant::coincidence_density(500, {0, 100, 100, 50, 9999});
    ASSERT_EQ(series.points.size(), 3u);
    EXPECT_EQ(series.points[0].limit, 50u);
    EXPECT_EQ(series.points[1].limit, 100u);
    EXPECT_EQ(series.points[2].limit, 500u);
    EXPECT_THROW(diophant::coincidence_density(0, {}), std::domain_error);
    EXPECT_THROW(diophant::coincidence_density(1000, {}, 100),
                 diophant::ResourceCapExceeded);
}

TEST(Stats, SmallModularPrimitives) {
    using diophant::detail::is_prime_u64;
    using diophant::detail::mulmod_u64;
    using diophant::detail::powmod_u64;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t a = rng(), b = rng(), m = rng() | 1;
        unsigned __int128 want = (unsigned __int128)(a % m) * (b % m) % m;
        EXPECT_EQ(mulmod_u64(a % m, b % m, m), (std::uint64_t)want);
    }
    EXPECT_EQ(powmod_u64(2, 10, 1000), 24u);
    EXPECT_EQ(powmod_u64(3, 1000002, 1000003), 1u); // Fermat at a prime modulus

    EXPECT_FALSE(is_prime_u64(0));
    EXPECT_FALSE(is_prime_u64(1));
    EXPECT_TRUE(is_prime_u64(2));
    EXPECT_TRUE(is_prime_u64(3));
    EXPECT_FALSE(is_prime_u64(1000001)); // 101 * 9901
    EXPECT_TRUE(is_prime_u64(1000003));
    EXPECT_TRUE(is_prime_u64((1ULL << 61) - 1));
    EXPECT_FALSE(is_prime_u64((1ULL << 61) + 1)); // divisible by 3
    // strong-pseudoprime trap: 3215031751 fools bases {2,3,5,7} individually
    EXPECT_FALSE(is_prime_u64(3215031751ULL));
}

TEST(Stats, FactorProfileStructured) {
    auto one = diophant::factor_profile(1);
    EXPECT_TRUE(one.trivial);
    EXPECT_EQ(one.largest_prime, 1);
    EXPECT_EQ(one.squarefree_kernel, 1);

    auto twelve = diophant::factor_profile(12);
    EXPECT_EQ(twelve.largest_prime, 3);
    EXPECT_EQ(twelve.squarefree_kernel, 6);

    auto p97 = diophant::factor_profile(97);
    EXPECT_EQ(p97.largest_prime, 97);
    EXPECT_EQ(p97.squarefree_kernel, 97);

    auto n360 = diophant::factor_profile(360); // 2^3 * 3^2 * 5
    EXPECT_EQ(n360.largest_prime, 5);
    EXPECT_EQ(n360.squarefree_kernel, 30);

    mpz_class ten20;
    mpz_ui_pow_ui(ten20.get_mpz_t(), 10, 20);
    auto pow10 = diophant::factor_profile(ten20);
    EXPECT_EQ(pow10.largest_prime, 5);
    EXPECT_EQ(pow10.squarefree_kernel, 10);

    EXPECT_THROW(diophant::factor_profile(0), std::domain_error);
}

TEST(Stats, FactorProfileSemiprimeAndLargePrime) {
    // a semiprime beyond trial division exercises the rho splitter
    mpz_class a(1000003), b(1000033);
    auto sp = diophant::factor_profile(a * b);
    EXPECT_EQ(sp.largest_prime, b);
    EXPECT_EQ(sp.squarefree_kernel, a * b);

    // an 89-bit prime must be recognized, not split
    mpz_class m89 = (mpz_class(1) << 89) - 1;
    auto mp = diophant::factor_profile(m89);
    EXPECT_EQ(mp.largest_prime, m89);
    EXPECT_EQ(mp.squarefree_kernel, m89);
}

TEST(Stats, ConvergentFactorRows) {
    // denominators of the all-ones expansion are Fibonacci numbers
    std::vector<mpz_class> ones(24, mpz_class(1));
    auto cf = ContinuedFraction::make(1, ones, diophant::CfTermination::capped);
    auto rows = diophant::convergent_factor_stats(cf, 25);
    ASSERT_EQ(rows.size(), 25u);

    EXPECT_EQ(rows[5].q, 8);
    EXPECT_TRUE(rows[5].factored);
    EXPECT_EQ(rows[5].largest_prime, 2);
    EXPECT_EQ(rows[5].squarefree_kernel, 2);
    // log P * log log q < log q for such a smooth denominator
    EXPECT_EQ(rows[5].prime_lower_ok, Tri::no);

    // below e^e even a prime denominator fails the P-bound...
    EXPECT_EQ(rows[6].q, 13);
    EXPECT_EQ(rows[6].prime_lower_ok, Tri::no);
    // ... while q = 2 and q = 3 are skipped entirely
    EXPECT_EQ(rows[2].q, 2);
    EXPECT_EQ(rows[2].prime_lower_ok, Tri::undecided);
    EXPECT_TRUE(rows[2].factored);

    // q_k = F_{k+1}: every row is factored under the default bit cap
    for (const auto& row : rows) EXPECT_TRUE(row.factored) << row.k;

    EXPECT_THROW(diophant::convergent_factor_stats(cf, 5, Rational(0)),
                 std::domain_error);
    EXPECT_THROW(diophant::convergent_factor_stats(cf, 5, Rational(3, 2)),
                 std::domain_error);
}

TEST(Stats, ConvergentFactorRowsPrimeDenominator) {
    // q = 113 (a prime above e^e) passes both certified lower bounds
    auto cf = diophant::from_rational(Rational(355, 113));
    auto rows = diophant::convergent_factor_stats(cf, cf.size());
    const auto& last = rows.back();
    ASSERT_EQ(last.q, 113);
    ASSERT_TRUE(last.factored);
    EXPECT_EQ(last.largest_prime, 113);
    EXPECT_EQ(last.prime_lower_ok, Tri::yes);
    EXPECT_EQ(last.kernel_lower_ok, Tri::yes);
}

TEST(Stats, ConvergentFactorBitCap) {
    // rows beyond the bit cap are reported unfactored with undecided verdicts
    std::vector<mpz_class> ones(299, mpz_class(1));
    auto cf = ContinuedFraction::make(1, ones, diophant::CfTermination::capped);
    auto rows = diophant::convergent_factor_stats(cf, 300, Rational(1, 2), 64);
    bool saw_capped = false;
    for (const auto& row : rows) {
        if (row.q_bits > 64) {
            saw_capped = true;
            EXPECT_FALSE(row.factored);
            EXPECT_EQ(row.prime_lower_ok, Tri::undecided);
            EXPECT_EQ(row.kernel_lower_ok, Tri::undecided);
        }
        EXPECT_EQ(row.q_bits, mpz_sizeinbase(row.q.get_mpz_t(), 2));
    }
    EXPECT_TRUE(saw_capped);
}

TEST(Stats, GrowthFitRecoversSlope) {
    std::vector<diophant::GrowthSample> samples;
    for (unsigned long x : {16UL, 64UL, 256UL, 1024UL, 65536UL})
        samples.push_back({x, 2.0 * std::log2(double(x)) + 3.0});
    auto fit = diophant::denominator_growth(samples);
    EXPECT_NEAR(fit.fitted_exponent, 2.0, 1e-9);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);

    EXPECT_THROW(diophant::denominator_growth({}), std::domain_error);
    EXPECT_THROW(diophant::denominator_growth({{10, 1.0}}), std::domain_error);
    EXPECT_THROW(diophant::denominator_growth({{10, 1.0}, {10, 2.0}}),
                 std::domain_error);
}

} // namespace
