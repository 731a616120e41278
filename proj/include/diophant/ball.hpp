#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "diophant/errors.hpp"
#include "diophant/rational.hpp"

namespace diophant {

// Working precision for ball midpoints, in bits.
struct Precision {
    int bits;

    static Precision of_bits(int b) {
        if (b < 64) throw std::domain_error("Precision: fewer than 64 bits");
        return Precision{b};
    }
    // floor(bits * log10(2))
    int decimal_digits() const { return static_cast<int>(bits * 30103LL / 100000LL); }
};

namespace detail {

// RAII wrapper for a scratch mpfr_t.
struct Mpfr {
    mpfr_t x;
    explicit Mpfr(mpfr_prec_t p) { mpfr_init2(x, p); }
    ~Mpfr() { mpfr_clear(x); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    operator mpfr_ptr() { return x; }         // NOLINT
    operator mpfr_srcptr() const { return x; } // NOLINT
};

constexpr mpfr_prec_t kRadiusPrec = 64;

} // namespace detail

// Midpoint-radius enclosure of a real number: the represented value xi
// satisfies |xi - midpoint| <= radius. Midpoints carry the working
// precision; radii are coarse 64-bit upper bounds, always rounded up.
// Every operation returns a ball whose interval encloses the exact image
// of the input intervals (input radii plus midpoint rounding error).
class Ball {
public:
    explicit Ball(Precision p) : prec_(p) {
        mpfr_init2(mid_, p.bits);
        mpfr_init2(rad_, detail::kRadiusPrec);
        mpfr_set_zero(mid_, 1);
        mpfr_set_zero(rad_, 1);
    }
    Ball(const Ball& o) : prec_(o.prec_) {
        mpfr_init2(mid_, mpfr_get_prec(o.mid_));
        mpfr_init2(rad_, detail::kRadiusPrec);
        mpfr_set(mid_, o.mid_, MPFR_RNDN); // same precision: exact
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
    }
    Ball(Ball&& o) noexcept : prec_(o.prec_) {
        mpfr_init2(mid_, 2);
        mpfr_init2(rad_, 2);
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
    }
    Ball& operator=(const Ball& o) {
        if (this != &o) {
            Ball tmp(o);
            swap(tmp);
        }
        return *this;
    }
    Ball& operator=(Ball&& o) noexcept {
        swap(o);
        return *this;
    }
    ~Ball() {
        mpfr_clear(mid_);
        mpfr_clear(rad_);
    }
    void swap(Ball& o) noexcept {
        std::swap(prec_, o.prec_);
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
    }

    // ---- constructors -------------------------------------------------

    static Ball of_int(long v, Precision p) {
        Ball b(p);
        int t = mpfr_set_si(b.mid_, v, MPFR_RNDN);
        b.bump_rounding(t);
        return b;
    }
    static Ball of_int(const mpz_class& v, Precision p) {
        Ball b(p);
        int t = mpfr_set_z(b.mid_, v.get_mpz_t(), MPFR_RNDN);
        b.bump_rounding(t); // huge integers may not be representable exactly
        return b;
    }
    static Ball of_rational(const Rational& q, Precision p) {
        Ball b(p);
        int t = mpfr_set_q(b.mid_, q.raw().get_mpq_t(), MPFR_RNDN);
        b.bump_rounding(t);
        return b;
    }
    // Ball around a decimal midpoint with an explicit radius, both exact
    // rationals; used for user-supplied literals.
    static Ball of_rational_with_radius(const Rational& q, const Rational& radius, Precision p) {
        if (radius.sign() < 0) throw std::domain_error("Ball: negative radius");
        Ball b = of_rational(q, p);
        detail::Mpfr r(detail::kRadiusPrec);
        mpfr_set_q(r, radius.raw().get_mpq_t(), MPFR_RNDU);
        mpfr_add(b.rad_, b.rad_, r, MPFR_RNDU);
        return b;
    }
    // Ball from explicit dyadic midpoint and radius (radius rounded up).
    static Ball of_midrad(mpfr_srcptr mid, mpfr_srcptr rad, Precision p) {
        if (mpfr_sgn(rad) < 0) throw std::domain_error("Ball: negative radius");
        Ball b(p);
        int t = mpfr_set(b.mid_, mid, MPFR_RNDN);
        mpfr_set(b.rad_, rad, MPFR_RNDU);
        b.bump_rounding(t);
        return b;
    }
    static Ball pi(Precision p) {
        Ball b(p);
        int t = mpfr_const_pi(b.mid_, MPFR_RNDN);
        b.bump_rounding(t);
        return b;
    }
    // Enclosure [lo, hi] given as dyadic endpoints.
    static Ball of_interval(mpfr_srcptr lo, mpfr_srcptr hi, Precision p) {
        if (mpfr_cmp(lo, hi) > 0) throw std::domain_error("Ball: interval endpoints out of order");
        Ball b(p);
        mpfr_add(b.mid_, lo, hi, MPFR_RNDN);
        mpfr_div_2ui(b.mid_, b.mid_, 1, MPFR_RNDN);
        detail::Mpfr r1(detail::kRadiusPrec), r2(detail::kRadiusPrec);
        mpfr_sub(r1, hi, b.mid_, MPFR_RNDU);
        mpfr_sub(r2, b.mid_, lo, MPFR_RNDU);
        mpfr_max(b.rad_, r1, r2, MPFR_RNDU);
        if (mpfr_sgn(b.rad_) < 0) mpfr_set_zero(b.rad_, 1);
        return b;
    }

    // ---- observers ----------------------------------------------------

    Precision precision() const { return prec_; }
    mpfr_srcptr mid() const { return mid_; }
    mpfr_srcptr rad() const { return rad_; }

    bool is_exact() const { return mpfr_zero_p(rad_); }
    bool is_exact_zero() const { return is_exact() && mpfr_zero_p(mid_); }
    bool contains_zero() const { return mpfr_cmpabs(mid_, rad_) <= 0; }

    // +1 / -1 when the whole interval is on one side of zero, 0 for the
    // exact zero ball, nullopt when the interval straddles zero.
    std::optional<int> certified_sign() const {
        if (is_exact_zero()) return 0;
        if (!contains_zero()) return mpfr_sgn(mid_);
        return std::nullopt;
    }

    double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
    double rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }

    // Sound dyadic endpoints; `out` may be any precision (bounds stay sound).
    void lower_bound(mpfr_ptr out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
    void upper_bound(mpfr_ptr out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

    // ---- arithmetic ---------------------------------------------------

    friend Ball operator+(const Ball& a, const Ball& b) {
        Ball r(join(a, b));
        int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }
    friend Ball operator-(const Ball& a, const Ball& b) {
        Ball r(join(a, b));
        int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }
    Ball operator-() const {
        Ball r(*this);
        mpfr_neg(r.mid_, r.mid_, MPFR_RNDN); // exact
        return r;
    }
    friend Ball operator*(const Ball& a, const Ball& b) {
        Ball r(join(a, b));
        int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        // |a||rb| + |b||ra| + ra rb, all rounded up
        detail::Mpfr am(detail::kRadiusPrec), bm(detail::kRadiusPrec), term(detail::kRadiusPrec);
        mpfr_abs(am, a.mid_, MPFR_RNDU);
        mpfr_abs(bm, b.mid_, MPFR_RNDU);
        mpfr_mul(term, am, b.rad_, MPFR_RNDU);
        mpfr_set(r.rad_, term.x, MPFR_RNDU);
        mpfr_mul(term, bm, a.rad_, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, term, MPFR_RNDU);
        mpfr_mul(term, a.rad_, b.rad_, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, term, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }
    friend Ball operator/(const Ball& a, const Ball& b) {
        if (b.is_exact_zero()) throw std::domain_error("Ball: division by exact zero");
        detail::Mpfr lo(detail::kRadiusPrec);
        mpfr_abs(lo, b.mid_, MPFR_RNDD);
        mpfr_sub(lo, lo, b.rad_, MPFR_RNDD);
        if (mpfr_sgn(lo.x) <= 0)
            throw PrecisionExhausted("Ball: divisor ball contains zero");
        Ball r(join(a, b));
        int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        // |(a+da)/(b+db) - a/b| <= (|b| ra + |a| rb) / (|b| (|b| - rb))
        detail::Mpfr am(detail::kRadiusPrec), bm(detail::kRadiusPrec);
        detail::Mpfr num(detail::kRadiusPrec), den(detail::kRadiusPrec), term(detail::kRadiusPrec);
        mpfr_abs(am, a.mid_, MPFR_RNDU);
        mpfr_abs(bm, b.mid_, MPFR_RNDU);
        mpfr_mul(num, bm, a.rad_, MPFR_RNDU);
        mpfr_mul(term, am, b.rad_, MPFR_RNDU);
        mpfr_add(num, num, term, MPFR_RNDU);
        mpfr_abs(den, b.mid_, MPFR_RNDD);
        mpfr_mul(den, den, lo, MPFR_RNDD);
        mpfr_div(r.rad_, num, den, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }

    Ball recip() const { return of_int(1L, prec_) / *this; }

    Ball abs() const {
        if (!contains_zero()) {
            Ball r(*this);
            mpfr_abs(r.mid_, r.mid_, MPFR_RNDN); // exact
            return r;
        }
        // interval [0, |mid| + rad], encoded symmetrically around hi/2
        detail::Mpfr hi(detail::kRadiusPrec);
        mpfr_abs(hi, mid_, MPFR_RNDU);
        mpfr_add(hi, hi, rad_, MPFR_RNDU);
        Ball r(prec_);
        mpfr_div_2ui(r.mid_, hi, 1, MPFR_RNDU); // exact: 64-bit value into >=64-bit midpoint
        mpfr_set(r.rad_, r.mid_, MPFR_RNDU);
        return r;
    }

    Ball sqrt() const {
        detail::Mpfr lo(detail::kRadiusPrec);
        detail::Mpfr hi(detail::kRadiusPrec);
        mpfr_set(lo, mid_, MPFR_RNDD);
        mpfr_sub(lo, lo, rad_, MPFR_RNDD);
        mpfr_set(hi, mid_, MPFR_RNDU);
        mpfr_add(hi, hi, rad_, MPFR_RNDU);
        if (mpfr_sgn(hi.x) < 0) throw std::domain_error("Ball: sqrt of negative ball");
        if (mpfr_sgn(lo.x) <= 0) {
            // touches zero: enclose [0, sqrt(hi)]
            mpfr_sqrt(hi, hi, MPFR_RNDU);
            Ball r(prec_);
            mpfr_div_2ui(r.mid_, hi, 1, MPFR_RNDU);
            mpfr_set(r.rad_, r.mid_, MPFR_RNDU);
            return r;
        }
        Ball r(prec_);
        int t = mpfr_sqrt(r.mid_, mid_, MPFR_RNDN);
        // |sqrt(x+d) - sqrt(x)| <= |d| / (2 sqrt(lo))
        detail::Mpfr d(detail::kRadiusPrec);
        mpfr_sqrt(d, lo, MPFR_RNDD);
        mpfr_mul_2ui(d, d, 1, MPFR_RNDD);
        mpfr_div(r.rad_, rad_, d, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }

    Ball log() const {
        detail::Mpfr lo(detail::kRadiusPrec);
        mpfr_set(lo, mid_, MPFR_RNDD);
        mpfr_sub(lo, lo, rad_, MPFR_RNDD);
        if (mpfr_sgn(lo.x) <= 0) {
            if (contains_zero() && !is_exact_zero())
                throw PrecisionExhausted("Ball: log of ball touching zero");
            throw std::domain_error("Ball: log of nonpositive ball");
        }
        Ball r(prec_);
        int t = mpfr_log(r.mid_, mid_, MPFR_RNDN);
        mpfr_div(r.rad_, rad_, lo, MPFR_RNDU); // MVT: 1/xi <= 1/lo
        r.bump_rounding(t);
        return r;
    }

    Ball pow_ui(unsigned long k) const {
        Ball acc = of_int(1L, prec_);
        Ball base(*this);
        while (k > 0) {
            if (k & 1) acc = acc * base;
            k >>= 1;
            if (k) base = base * base;
        }
        return acc;
    }

    // Exact-rational mixed operations avoid a second rounding.
    Ball add_rational(const Rational& q) const {
        Ball r(prec_);
        int t = mpfr_add_q(r.mid_, mid_, q.raw().get_mpq_t(), MPFR_RNDN);
        mpfr_set(r.rad_, rad_, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }
    Ball sub_rational(const Rational& q) const {
        Ball r(prec_);
        int t = mpfr_sub_q(r.mid_, mid_, q.raw().get_mpq_t(), MPFR_RNDN);
        mpfr_set(r.rad_, rad_, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }
    Ball mul_rational(const Rational& q) const {
        Ball r(prec_);
        int t = mpfr_mul_q(r.mid_, mid_, q.raw().get_mpq_t(), MPFR_RNDN);
        detail::Mpfr qa(detail::kRadiusPrec);
        mpfr_set_q(qa, q.raw().get_mpq_t(), MPFR_RNDA);
        mpfr_abs(qa, qa, MPFR_RNDU);
        mpfr_mul(r.rad_, rad_, qa, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }
    Ball sub_int(const mpz_class& z) const {
        Ball r(prec_);
        int t = mpfr_sub_z(r.mid_, mid_, z.get_mpz_t(), MPFR_RNDN);
        mpfr_set(r.rad_, rad_, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }

    // Same midpoint, radius grown by an upper bound of `margin` (which must
    // be certifiably nonnegative); used to fold method-error certificates
    // into an enclosure.
    Ball inflated_by_upper(const Ball& margin) const {
        detail::Mpfr hi(detail::kRadiusPrec);
        margin.upper_bound(hi);
        if (mpfr_sgn(hi.x) < 0) throw std::domain_error("Ball: negative inflation margin");
        Ball r(*this);
        mpfr_add(r.rad_, r.rad_, hi, MPFR_RNDU);
        return r;
    }

    Ball at_precision(Precision p) const {
        Ball r(p);
        int t = mpfr_set(r.mid_, mid_, MPFR_RNDN);
        mpfr_set(r.rad_, rad_, MPFR_RNDU);
        r.bump_rounding(t);
        return r;
    }

    // ---- certified comparisons -----------------------------------------

    // a < b for every pair of represented values?
    static Tri less(const Ball& a, const Ball& b) {
        mpfr_prec_t p = std::max(mpfr_get_prec(a.mid_), mpfr_get_prec(b.mid_)) + 64;
        detail::Mpfr ahi(p), blo(p), alo(p), bhi(p);
        a.upper_bound(ahi);
        b.lower_bound(blo);
        if (mpfr_cmp(ahi, blo) < 0) return Tri::yes;
        a.lower_bound(alo);
        b.upper_bound(bhi);
        if (mpfr_cmp(alo, bhi) >= 0) return Tri::no;
        return Tri::undecided;
    }

    Tri less_than(const Rational& q) const {
        mpfr_prec_t p = mpfr_get_prec(mid_) + 64;
        detail::Mpfr hi(p), lo(p);
        upper_bound(hi);
        if (mpfr_cmp_q(hi, q.raw().get_mpq_t()) < 0) return Tri::yes;
        lower_bound(lo);
        if (mpfr_cmp_q(lo, q.raw().get_mpq_t()) >= 0) return Tri::no;
        return Tri::undecided;
    }
    Tri greater_than(const Rational& q) const {
        mpfr_prec_t p = mpfr_get_prec(mid_) + 64;
        detail::Mpfr hi(p), lo(p);
        lower_bound(lo);
        if (mpfr_cmp_q(lo, q.raw().get_mpq_t()) > 0) return Tri::yes;
        upper_bound(hi);
        if (mpfr_cmp_q(hi, q.raw().get_mpq_t()) <= 0) return Tri::no;
        return Tri::undecided;
    }

    // exact: lo <= q <= hi
    bool contains(const Rational& q) const {
        mpfr_prec_t p = mpfr_get_prec(mid_) + 64;
        detail::Mpfr hi(p), lo(p);
        lower_bound(lo);
        upper_bound(hi);
        return mpfr_cmp_q(lo, q.raw().get_mpq_t()) <= 0 &&
               mpfr_cmp_q(hi, q.raw().get_mpq_t()) >= 0;
    }

    bool overlaps(const Ball& o, double slack = 0.0) const {
        mpfr_prec_t p = std::max(mpfr_get_prec(mid_), mpfr_get_prec(o.mid_)) + 64;
        detail::Mpfr ahi(p), alo(p), bhi(p), blo(p);
        upper_bound(ahi);
        lower_bound(alo);
        o.upper_bound(bhi);
        o.lower_bound(blo);
        if (slack != 0.0) {
            mpfr_add_d(ahi, ahi, slack, MPFR_RNDU);
            mpfr_sub_d(alo, alo, slack, MPFR_RNDD);
        }
        return !(mpfr_cmp(ahi, blo) < 0 || mpfr_cmp(bhi, alo) < 0);
    }

    // Unique integer floor of every value in the ball, if one exists.
    std::optional<mpz_class> certified_floor() const {
        mpfr_prec_t p = mpfr_get_prec(mid_) + 64;
        detail::Mpfr lo(p), hi(p);
        lower_bound(lo);
        upper_bound(hi);
        mpz_class f1, f2;
        mpfr_get_z(f1.get_mpz_t(), lo, MPFR_RNDD);
        mpfr_get_z(f2.get_mpz_t(), hi, MPFR_RNDD);
        if (f1 == f2) return f1;
        return std::nullopt;
    }

    // ---- decimal rendering ----------------------------------------------

    struct Decimal {
        std::string text; // n-digit rendering of the midpoint
        int certified;    // leading digits shared by every value in the ball
    };

    // Fixed-point with n fraction digits below 10^15, scientific above.
    Decimal decimal_digits(int n) const {
        if (n < 1) throw std::domain_error("decimal_digits: n must be >= 1");
        mpfr_prec_t p = mpfr_get_prec(mid_) + 64;
        detail::Mpfr lo(p), hi(p);
        lower_bound(lo);
        upper_bound(hi);
        Decimal out;
        out.text = render(mid_, n);
        out.certified = 0;
        for (int k = n; k >= 1; --k) {
            if (render(lo, k) == render(hi, k)) {
                out.certified = k;
                break;
            }
        }
        return out;
    }

    std::string str(int n) const { return decimal_digits(n).text; }

private:
    static Precision join(const Ball& a, const Ball& b) {
        return Precision{std::max(a.prec_.bits, b.prec_.bits)};
    }

    // Account for the midpoint's round-to-nearest error: half an ulp,
    // 2^(exp - prec - 1), whenever the last operation was inexact.
    void bump_rounding(int ternary) {
        if (ternary == 0) return;
        mpfr_exp_t e;
        if (mpfr_zero_p(mid_)) {
            e = mpfr_get_emin() + 64; // unreachable in practice
        } else {
            e = mpfr_get_exp(mid_);
        }
        detail::Mpfr ulp(detail::kRadiusPrec);
        mpfr_set_ui_2exp(ulp, 1, e - mpfr_get_prec(mid_) - 1, MPFR_RNDU);
        mpfr_add(rad_, rad_, ulp, MPFR_RNDU);
    }

    static std::string render(mpfr_srcptr v, int k) {
        char* s = nullptr;
        detail::Mpfr a(mpfr_get_prec(v));
        mpfr_abs(a, v, MPFR_RNDU);
        int big = mpfr_cmp_d(a, 1e15) >= 0;
        int len = big ? mpfr_asprintf(&s, "%.*Re", k, v)
                      : mpfr_asprintf(&s, "%.*Rf", k, v);
        if (len < 0 || s == nullptr) throw std::runtime_error("mpfr_asprintf failed");
        std::string out(s);
        mpfr_free_str(s);
        // "-0.000" and "0.000" are the same rendered value
        if (!out.empty() && out[0] == '-') {
            bool all_zero = true;
            for (char c : out.substr(1))
                if (c != '0' && c != '.' && c != 'e' && c != '+' && c != '-') { all_zero = false; break; }
            if (all_zero) out = out.substr(1);
        }
        return out;
    }

    Precision prec_;
    mpfr_t mid_;
    mpfr_t rad_;
};

} // namespace diophant
