#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "diophant/ball.hpp"
#include "diophant/contfrac.hpp"
#include "diophant/errors.hpp"
#include "diophant/lseries.hpp"
#include "diophant/rational.hpp"
#include "diophant/stats.hpp"

namespace diophant {

namespace detail {

// Range of min(a, b) over the two enclosures: [min(lo_a, lo_b), min(hi_a, hi_b)].
inline Ball ball_min(const Ball& a, const Ball& b) {
    Precision p = Precision::of_bits(std::max(a.precision().bits, b.precision().bits));
    Mpfr alo(p.bits + 64), ahi(p.bits + 64), blo(p.bits + 64), bhi(p.bits + 64);
    a.lower_bound(alo);
    a.upper_bound(ahi);
    b.lower_bound(blo);
    b.upper_bound(bhi);
    Mpfr lo(p.bits + 64), hi(p.bits + 64);
    mpfr_min(lo, alo, blo, MPFR_RNDD);
    mpfr_min(hi, ahi, bhi, MPFR_RNDU);
    return Ball::of_interval(lo, hi, p);
}

// log2 of a positive integer, accurate to double precision for any size.
inline double log2_of(const mpz_class& z) {
    if (z <= 0) throw std::domain_error("log2_of: argument must be positive");
    Mpfr t(96);
    mpfr_set_z(t, z.get_mpz_t(), MPFR_RNDN);
    mpfr_log2(t, t, MPFR_RNDN);
    return mpfr_get_d(t, MPFR_RNDN);
}

} // namespace detail

// a <= b certified over every pair of members; the mirror of Ball::less.
inline Tri ball_le(const Ball& a, const Ball& b) { return tri_not(Ball::less(b, a)); }

// ---- convergent quality -------------------------------------------------

// One convergent measured against the two classical approximation
// thresholds. `gap` is a certified enclosure of |target - p/q|; each flag
// is three-valued because the gap ball may straddle its threshold.
struct ApproximationQuality {
    Ball target;
    Convergent approx;
    Ball gap;
    Tri dirichlet_ok; // gap < 1 / (2 q^2)
    Tri hurwitz_ok;   // gap < 1 / (sqrt(5) q^2)
};

inline ApproximationQuality approximation_quality(const Ball& xi, const Convergent& c) {
    if (c.q < 1) throw std::domain_error("approximation_quality: denominator must be positive");
    Ball diff = xi.sub_rational(c.value());
    if (diff.contains_zero() && !diff.is_exact_zero())
        throw PrecisionExhausted(
            "approximation_quality: cannot separate target from p/q at this precision");
    Ball gap = diff.abs();
    const mpz_class q2 = c.q * c.q;
    Tri dirichlet = gap.less_than(Rational(mpz_class(1), 2 * q2));
    Ball hurwitz_threshold =
        Ball::of_int(5L, xi.precision()).sqrt().mul_rational(Rational(q2)).recip();
    Tri hurwitz = Ball::less(gap, hurwitz_threshold);
    return ApproximationQuality{xi, c, gap, dirichlet, hurwitz};
}

// ---- unimodular pair gap test -------------------------------------------

// For an irreducible pair left = p/q < xi < right = r/s with qr - ps = 1,
// decides min{q^2 (xi - p/q), q^2 (r/s - xi)} < 1/2. The q^2 weight is
// applied to BOTH sides on purpose: this is the asymmetric displayed form,
// not the symmetric variant that weights the right gap by s^2.
inline Tri farey_pair_check(const Ball& xi, const Rational& left, const Rational& right) {
    const mpz_class det =
        left.denominator() * right.numerator() - left.numerator() * right.denominator();
    if (det != 1) throw std::domain_error("farey_pair_check: pair is not unimodular");
    if (xi.greater_than(left) != Tri::yes || xi.less_than(right) != Tri::yes)
        throw std::domain_error(
            "farey_pair_check: target not certifiably strictly between the pair");
    const Rational q2(mpz_class(left.denominator() * left.denominator()));
    Ball m1 = xi.sub_rational(left).mul_rational(q2);
    Ball m2 = (-xi.sub_rational(right)).mul_rational(q2);
    return detail::ball_min(m1, m2).less_than(Rational(1, 2));
}

// ---- irrationality-measure estimate --------------------------------------

// Finite-sample upper-envelope estimate of the irrationality measure:
// 1 + max(log q_{k+1} / log q_k) with k running over the suffix window
// [max(first k with q_k >= 2, n/2), n). The window drops the earliest
// ratios so that for quadratic irrationals the estimate decreases toward 2
// as n grows instead of being pinned by small-denominator noise.
// A terminated expansion denotes a known rational: measure 1 by convention.
inline double mu_estimate(const ContinuedFraction& cf, std::size_t n) {
    if (n < 3) throw std::domain_error("mu_estimate: need n >= 3");
    if (cf.terminated()) return 1.0;
    const std::size_t last = std::min(n, cf.size() - 1);
    if (last < 3) throw std::domain_error("mu_estimate: expansion too short");
    auto cs = convergents(cf, last + 1);
    std::size_t kmin = 0;
    while (kmin < cs.size() && cs[kmin].q < 2) ++kmin;
    const std::size_t start = std::max(kmin, last / 2);
    double best = 0.0;
    for (std::size_t k = start; k < last; ++k) {
        double ratio = detail::log2_of(cs[k + 1].q) / detail::log2_of(cs[k].q);
        best = std::max(best, ratio);
    }
    return 1.0 + best;
}

// ---- exponent-threshold census --------------------------------------------

enum class RothVariant {
    roth, // gap <= q^(-2-eps)
    lange // gap <= q^(-2) (log q)^(-1-eps)
};

struct RothCensus {
    std::size_t solutions = 0;
    std::size_t undecided = 0;
    std::vector<Tri> per_convergent;
};

// Counts convergents whose gap certifiably beats the chosen exponent
// threshold. A diagnostic census over the given finite list, not a
// finiteness statement. Comparisons run in log scale so denominators of
// any size stay cheap; undecidable rows are tallied separately.
inline RothCensus roth_count(const Ball& xi, const std::vector<Convergent>& cs,
                             const Rational& eps, RothVariant variant) {
    if (eps.sign() <= 0) throw std::domain_error("roth_count: eps must be positive");
    RothCensus out;
    out.per_convergent.reserve(cs.size());
    const Precision p = xi.precision();
    for (const auto& c : cs) {
        if (c.q < 1) throw std::domain_error("roth_count: nonpositive denominator");
        Ball diff = xi.sub_rational(c.value());
        Tri verdict;
        if (diff.is_exact_zero()) {
            verdict = Tri::yes; // zero gap beats any positive threshold
        } else if (diff.contains_zero()) {
            verdict = Tri::undecided; // gap not separable from zero
        } else if (c.q == 1) {
            // q = 1: the roth threshold is 1 and the lange weight has no
            // log-q scale; both reduce to gap <= 1.
            verdict = tri_not(diff.abs().greater_than(Rational(1)));
        } else {
            Ball gap_log = diff.abs().log();
            Ball lq = Ball::of_int(c.q, p).log();
            Ball rhs = variant == RothVariant::roth
                           ? -lq.mul_rational(Rational(2) + eps)
                           : -lq.mul_rational(Rational(2)) -
                                 lq.log().mul_rational(Rational(1) + eps);
            verdict = ball_le(gap_log, rhs);
        }
        out.per_convergent.push_back(verdict);
        if (verdict == Tri::yes) ++out.solutions;
        else if (verdict == Tri::undecided) ++out.undecided;
    }
    return out;
}

// ---- denominator-growth audit ---------------------------------------------

// One grid point of the audit. `q_over_x_exponent` is log2(q_x) / log2(x);
// the growth-band flags say whether this point sits within the configured
// exponent band around the best least-squares intercept for a line of fixed
// slope s-1 (respectively s) in log-log space. `gap_sandwich` certifies
// 1/q_x <= |L(s)^2 - p_x/q_x| <= x^(-(s-eps)) at this point.
struct AuditRow {
    unsigned long x = 0;
    std::size_t q_bits = 0;
    double q_over_x_exponent = 0.0;
    Rational tail_upper;
    double gap_mid = 0.0;
    double gap_rad = 0.0;
    bool growth_band_s_minus_1 = false;
    bool growth_band_s = false;
    Tri gap_le_tail = Tri::undecided;
    Tri gap_sandwich = Tri::undecided;
};

struct AuditReport {
    long s = 0;
    int precision_bits = 0;
    std::vector<AuditRow> rows;
    double fitted_exponent = 0.0; // least-squares slope of log q_x vs log x
    double r2 = 0.0;
    // Summary hypothesis flags; measurements, not adjudication.
    bool growth_matches_s_minus_1 = false;   // every row inside the slope-(s-1) band
    bool growth_matches_s_on_subset = false; // some row inside the slope-s band
    bool qx_within_linear_bound = false;     // fitted exponent <= 1 + band
    bool gap_sandwich_satisfiable = false;   // every row's sandwich certified
};

// Measures how the reduced denominators q_x of the exact rearranged partial
// sums grow against the hypothesized power laws, and whether the two-sided
// gap sandwich can hold on the grid. Emits measurements and per-claim flags
// only; interpretation is left to the reader of the report.
inline AuditReport denominator_growth_audit(long s, std::vector<unsigned long> x_grid,
                                            Precision p, double exponent_band = 0.15,
                                            const Rational& eps = Rational(1, 10),
                                            unsigned long exact_cap = 1000000) {
    if (s < 2) throw std::domain_error("denominator_growth_audit: need s >= 2");
    if (x_grid.size() < 2)
        throw std::domain_error("denominator_growth_audit: need at least 2 grid points");
    if (!std::is_sorted(x_grid.begin(), x_grid.end()) ||
        std::adjacent_find(x_grid.begin(), x_grid.end()) != x_grid.end())
        throw std::domain_error("denominator_growth_audit: grid must be strictly increasing");
    if (x_grid.front() < 16)
        throw std::domain_error("denominator_growth_audit: grid points must be >= 16");
    if (!(exponent_band > 0.0))
        throw std::domain_error("denominator_growth_audit: band must be positive");
    if (eps.sign() <= 0 || Rational(s) - eps <= Rational(0))
        throw std::domain_error("denominator_growth_audit: need 0 < eps < s");
    if (eps.denominator() > 64)
        throw std::domain_error("denominator_growth_audit: eps denominator too large");

    auto table = divisor_sieve(x_grid.back());
    const Ball value_sq = beta_value(s, p).pow_ui(2);
    const unsigned long ev = eps.denominator().get_ui();
    const mpz_class eu = eps.numerator();

    AuditReport report;
    report.s = s;
    report.precision_bits = p.bits;
    std::vector<GrowthSample> samples;
    std::vector<double> l2x, l2q;
    for (unsigned long x : x_grid) {
        PartialSum ps = conv_partial_exact(s, x, &table, exact_cap);
        AuditRow row;
        row.x = x;
        row.q_bits = ps.q_bits;
        const mpz_class& qx = ps.value.denominator();
        const double lq = detail::log2_of(qx);
        const double lx = std::log2(static_cast<double>(x));
        row.q_over_x_exponent = lq / lx;
        row.tail_upper = tail_bound(s, x);

        Ball gap = value_sq.sub_rational(ps.value).abs();
        if (gap.contains_zero() && !gap.is_exact_zero())
            throw PrecisionExhausted(
                "denominator_growth_audit: gap not separable from zero at this precision");
        row.gap_mid = gap.mid_double();
        row.gap_rad = gap.rad_double();
        row.gap_le_tail = tri_not(gap.greater_than(row.tail_upper));

        // gap >= 1/q_x  and  gap <= x^(-(s - eps)); the right side is decided
        // through gap^ev * x^(s ev - eu) <= 1 to keep everything rational.
        Tri lower = tri_not(gap.less_than(Rational(mpz_class(1), qx)));
        mpz_class xpow;
        mpz_class expo = mpz_class(s) * ev - eu;
        mpz_ui_pow_ui(xpow.get_mpz_t(), x, mpz_get_ui(expo.get_mpz_t()));
        Tri upper = tri_not(gap.pow_ui(ev).mul_rational(Rational(xpow)).greater_than(Rational(1)));
        if (lower == Tri::no || upper == Tri::no) row.gap_sandwich = Tri::no;
        else if (lower == Tri::yes && upper == Tri::yes) row.gap_sandwich = Tri::yes;
        else row.gap_sandwich = Tri::undecided;

        samples.push_back(GrowthSample{x, lq});
        l2x.push_back(lx);
        l2q.push_back(lq);
        report.rows.push_back(std::move(row));
    }

    GrowthFit fit = denominator_growth(samples);
    report.fitted_exponent = fit.fitted_exponent;
    report.r2 = fit.r2;

    // Fixed-slope bands: best intercept under least squares is the mean
    // residual; a row passes when its residual stays within band * log2(x).
    auto apply_band = [&](double slope, auto set_flag) {
        double intercept = 0.0;
        for (std::size_t i = 0; i < l2x.size(); ++i) intercept += l2q[i] - slope * l2x[i];
        intercept /= static_cast<double>(l2x.size());
        for (std::size_t i = 0; i < l2x.size(); ++i) {
            double residual = l2q[i] - (slope * l2x[i] + intercept);
            set_flag(report.rows[i], std::abs(residual) <= exponent_band * l2x[i]);
        }
    };
    apply_band(static_cast<double>(s - 1),
               [](AuditRow& r, bool ok) { r.growth_band_s_minus_1 = ok; });
    apply_band(static_cast<double>(s), [](AuditRow& r, bool ok) { r.growth_band_s = ok; });

    report.growth_matches_s_minus_1 =
        std::all_of(report.rows.begin(), report.rows.end(),
                    [](const AuditRow& r) { return r.growth_band_s_minus_1; });
    report.growth_matches_s_on_subset =
        std::any_of(report.rows.begin(), report.rows.end(),
                    [](const AuditRow& r) { return r.growth_band_s; });
    report.qx_within_linear_bound = report.fitted_exponent <= 1.0 + exponent_band;
    report.gap_sandwich_satisfiable =
        std::all_of(report.rows.begin(), report.rows.end(),
                    [](const AuditRow& r) { return r.gap_sandwich == Tri::yes; });
    return report;
}

} // namespace diophant
