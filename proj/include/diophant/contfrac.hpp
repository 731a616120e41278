#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diophant/ball.hpp"
#include "diophant/errors.hpp"
#include "diophant/rational.hpp"

namespace diophant {

enum class CfTermination { terminated, capped };

// Partial-quotient sequence [a0; a1, a2, ...]. A `terminated` expansion
// is the complete canonical expansion of a rational (last quotient >= 2
// unless the whole expansion is a single integer); `capped` means the
// tail was cut off, either by the requested budget or because the next
// quotient could not be certified at the working radius.
class ContinuedFraction {
public:
    static ContinuedFraction make(mpz_class a0, std::vector<mpz_class> quotients,
                                  CfTermination termination) {
        for (const auto& a : quotients)
            if (a < 1) throw std::domain_error("ContinuedFraction: quotient below 1");
        if (termination == CfTermination::terminated && !quotients.empty() &&
            quotients.back() == 1) {
            // canonical form: [.., a, 1] == [.., a+1]
            quotients.pop_back();
            if (quotients.empty())
                a0 += 1;
            else
                quotients.back() += 1;
        }
        return ContinuedFraction(std::move(a0), std::move(quotients), termination);
    }

    const mpz_class& a0() const { return a0_; }
    const std::vector<mpz_class>& quotients() const { return quotients_; }
    CfTermination termination() const { return termination_; }
    bool terminated() const { return termination_ == CfTermination::terminated; }

    // number of partial quotients including a0; also the number of
    // convergents this expansion can produce
    std::size_t size() const { return 1 + quotients_.size(); }

    // quotient at position k (k = 0 is a0)
    const mpz_class& at(std::size_t k) const {
        if (k == 0) return a0_;
        if (k > quotients_.size()) throw std::out_of_range("ContinuedFraction: index");
        return quotients_[k - 1];
    }

    std::string str() const {
        std::ostringstream os;
        os << "[" << a0_.get_str();
        if (!quotients_.empty()) {
            os << ";";
            for (std::size_t i = 0; i < quotients_.size(); ++i)
                os << (i ? ", " : " ") << quotients_[i].get_str();
        }
        os << "]";
        return os.str();
    }

private:
    ContinuedFraction(mpz_class a0, std::vector<mpz_class> quotients, CfTermination t)
        : a0_(std::move(a0)), quotients_(std::move(quotients)), termination_(t) {}

    mpz_class a0_;
    std::vector<mpz_class> quotients_;
    CfTermination termination_;
};

struct Convergent {
    std::size_t index;
    mpz_class p;
    mpz_class q;

    Rational value() const { return Rational(p, q); }
};

struct CfClassification {
    enum class Kind { rational, periodic, unresolved };
    Kind kind;
    std::size_t preperiod = 0; // first iterate index of the repeating block
    std::size_t period = 0;    // lag at which iterates repeat
    std::size_t evidence = 0;  // Gauss iterates examined
};

struct CfStats {
    double khinchine_mean; // geometric mean of a1..an
    double levy_slope;     // log(q_n) / n
};

namespace detail {

// value of an exact ball as a rational (midpoint is dyadic, radius zero)
inline Rational rational_of_exact_ball(const Ball& x) {
    if (!x.is_exact()) throw std::logic_error("rational_of_exact_ball: nonzero radius");
    if (mpfr_zero_p(x.mid())) return Rational(0);
    mpz_class z;
    mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x.mid());
    if (e >= 0) {
        mpz_class num = z << static_cast<unsigned long>(e);
        return Rational(num);
    }
    mpz_class den = mpz_class(1) << static_cast<unsigned long>(-e);
    return Rational(z, den);
}

// intersect a ball known to enclose a value in [0,1] with [0,1]
inline Ball clamp_unit(const Ball& x) {
    mpfr_prec_t p = mpfr_get_prec(x.mid()) + 64;
    Mpfr lo(p), hi(p);
    x.lower_bound(lo);
    x.upper_bound(hi);
    bool dirty = false;
    if (mpfr_sgn(lo.x) < 0) {
        mpfr_set_zero(lo, 1);
        dirty = true;
    }
    if (mpfr_cmp_ui(hi.x, 1) > 0) {
        mpfr_set_ui(hi, 1, MPFR_RNDU);
        dirty = true;
    }
    if (!dirty) return x;
    return Ball::of_interval(lo, hi, x.precision());
}

} // namespace detail

// One step of the continued-fraction shift on [0,1]: 0 for exact zero,
// otherwise the fractional part of 1/x. The reciprocal's integer part
// must be unambiguous at the current radius.
inline Ball gauss_map(const Ball& x) {
    {
        mpfr_prec_t p = mpfr_get_prec(x.mid()) + 64;
        detail::Mpfr lo(p), hi(p);
        x.lower_bound(lo);
        x.upper_bound(hi);
        if (mpfr_sgn(lo.x) < 0 || mpfr_cmp_ui(hi.x, 1) > 0)
            throw std::domain_error("gauss_map: ball not within [0,1]");
    }
    if (x.is_exact_zero()) return Ball(x.precision());
    if (x.contains_zero())
        throw PrecisionExhausted("gauss_map: ball straddles zero");
    Ball y = x.recip();
    auto f = y.certified_floor();
    if (!f) throw PrecisionExhausted("gauss_map: reciprocal floor ambiguous");
    return detail::clamp_unit(y.sub_int(*f));
}

// Complete expansion of a rational by the Euclidean algorithm; always
// terminated and canonical.
inline ContinuedFraction from_rational(const Rational& r) {
    mpz_class num = r.numerator(), den = r.denominator();
    mpz_class a0, rem;
    mpz_fdiv_qr(a0.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    std::vector<mpz_class> qs;
    // expand rem/den: quotients of the Euclidean chain on (den, rem)
    while (rem != 0) {
        mpz_class a, r2;
        mpz_fdiv_qr(a.get_mpz_t(), r2.get_mpz_t(), den.get_mpz_t(), rem.get_mpz_t());
        qs.push_back(a);
        den = rem;
        rem = r2;
    }
    return ContinuedFraction::make(std::move(a0), std::move(qs), CfTermination::terminated);
}

// First partial quotients of the real enclosed by x, at most max_terms
// including a0. Every emitted quotient is certified: the whole ball maps
// to one integer floor. An exact (zero-radius) ball switches to the exact
// Euclidean path, so expansion of exact rationals is complete.
inline ContinuedFraction expand(const Ball& x, std::size_t max_terms) {
    if (max_terms < 1) throw std::domain_error("expand: max_terms must be >= 1");
    mpz_class a0;
    std::vector<mpz_class> qs;
    bool have_a0 = false;
    std::size_t emitted = 0;
    CfTermination term = CfTermination::capped;
    Ball cur(x);
    while (emitted < max_terms) {
        if (cur.is_exact()) {
            ContinuedFraction tail = from_rational(detail::rational_of_exact_ball(cur));
            bool complete = true;
            if (!have_a0) {
                a0 = tail.a0();
                have_a0 = true;
                ++emitted;
            } else if (tail.a0() != 0) {
                throw std::logic_error("expand: fractional part outside [0,1)");
            }
            for (const auto& a : tail.quotients()) {
                if (emitted >= max_terms) {
                    complete = false;
                    break;
                }
                qs.push_back(a);
                ++emitted;
            }
            term = complete ? CfTermination::terminated : CfTermination::capped;
            break;
        }
        if (!have_a0) {
            auto f = cur.certified_floor();
            if (!f) throw PrecisionExhausted("expand: integer part uncertified");
            a0 = *f;
            have_a0 = true;
            ++emitted;
            cur = detail::clamp_unit(cur.sub_int(a0));
            continue;
        }
        if (cur.contains_zero()) break; // next quotient uncertifiable
        Ball y = cur.recip();
        auto f = y.certified_floor();
        if (!f) break;
        if (*f < 1) throw std::logic_error("expand: quotient below 1");
        qs.push_back(*f);
        ++emitted;
        cur = detail::clamp_unit(y.sub_int(*f));
    }
    if (!have_a0) throw PrecisionExhausted("expand: integer part uncertified");
    return ContinuedFraction::make(std::move(a0), std::move(qs), term);
}

// Convergents p_k/q_k for k = 0..n-1 by the fundamental recursions.
// Fewer than n are returned when the expansion is shorter; `truncated`
// reports that case when provided.
inline std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t n,
                                           bool* truncated = nullptr) {
    std::size_t avail = cf.size();
    std::size_t count = std::min(n, avail);
    if (truncated) *truncated = count < n;
    std::vector<Convergent> out;
    out.reserve(count);
    mpz_class p_prev2, p_prev1, q_prev2, q_prev1;
    for (std::size_t k = 0; k < count; ++k) {
        mpz_class p, q;
        if (k == 0) {
            p = cf.a0();
            q = 1;
        } else if (k == 1) {
            p = cf.at(1) * cf.a0() + 1;
            q = cf.at(1);
        } else {
            p = cf.at(k) * p_prev1 + p_prev2;
            q = cf.at(k) * q_prev1 + q_prev2;
        }
        out.push_back(Convergent{k, p, q});
        p_prev2 = std::move(p_prev1);
        q_prev2 = std::move(q_prev1);
        p_prev1 = out.back().p;
        q_prev1 = out.back().q;
    }
    return out;
}

// Partial sum of the telescoping series a0 + sum_{k=1..n} (-1)^(k+1)/(q_k q_{k-1});
// equals the n-th convergent exactly.
inline Rational cf_series_partial(const ContinuedFraction& cf, std::size_t n) {
    if (n < 1) throw std::domain_error("cf_series_partial: n must be >= 1");
    if (n >= cf.size()) throw std::domain_error("cf_series_partial: not enough quotients");
    std::vector<Convergent> cs = convergents(cf, n + 1);
    Rational acc(cf.a0());
    for (std::size_t k = 1; k <= n; ++k) {
        Rational term(1, cs[k].q * cs[k - 1].q);
        if (k % 2 == 0) term = -term;
        acc += term;
    }
    return acc;
}

// Repeated Gauss iteration with enclosure comparison. `rational` needs a
// certified zero iterate; `periodic` is evidence only (enclosure overlap
// at some lag over at least one full extra period), never proof.
inline CfClassification classify(const Ball& x, std::size_t max_iterates,
                                 double tolerance = 0.0) {
    if (max_iterates < 2) throw std::domain_error("classify: max_iterates must be >= 2");
    std::vector<Ball> iterates;
    iterates.reserve(max_iterates + 1);
    auto f = x.certified_floor();
    if (!f) throw PrecisionExhausted("classify: integer part uncertified");
    iterates.push_back(detail::clamp_unit(x.sub_int(*f)));
    for (std::size_t k = 0; k < max_iterates; ++k) {
        if (iterates.back().is_exact_zero())
            return CfClassification{CfClassification::Kind::rational, 0, 0, k};
        iterates.push_back(gauss_map(iterates.back()));
    }
    if (iterates.back().is_exact_zero())
        return CfClassification{CfClassification::Kind::rational, 0, 0, max_iterates};
    std::size_t m = iterates.size() - 1; // highest iterate index
    for (std::size_t t = 1; t <= m / 2; ++t) {
        // smallest start from which every lag-t pair overlaps
        std::size_t start = m - t + 1;
        while (start > 0 && iterates[start - 1].overlaps(iterates[start - 1 + t], tolerance))
            --start;
        bool enough_window = (m - t >= start) && (m - start >= 2 * t);
        if (enough_window && start + t <= m)
            return CfClassification{CfClassification::Kind::periodic, start, t, max_iterates};
    }
    return CfClassification{CfClassification::Kind::unresolved, 0, 0, max_iterates};
}

// Geometric mean of the first n quotients past a0, and log(q_n)/n.
inline CfStats cf_statistics(const ContinuedFraction& cf, std::size_t n) {
    if (n < 2) throw std::domain_error("cf_statistics: n must be >= 2");
    if (n >= cf.size()) throw std::domain_error("cf_statistics: not enough quotients");
    mpz_class prod(1);
    for (std::size_t k = 1; k <= n; ++k) prod *= cf.at(k);
    double mean;
    {
        // exact n-th root when the product is a perfect power, else via logs
        mpz_class root;
        int exact = mpz_root(root.get_mpz_t(), prod.get_mpz_t(), static_cast<unsigned long>(n));
        if (exact) {
            mean = root.get_d();
        } else {
            detail::Mpfr t(128);
            mpfr_set_z(t, prod.get_mpz_t(), MPFR_RNDN);
            mpfr_log(t, t, MPFR_RNDN);
            mpfr_div_ui(t, t, static_cast<unsigned long>(n), MPFR_RNDN);
            mpfr_exp(t, t, MPFR_RNDN);
            mean = mpfr_get_d(t, MPFR_RNDN);
        }
    }
    std::vector<Convergent> cs = convergents(cf, n + 1);
    detail::Mpfr t(128);
    mpfr_set_z(t, cs[n].q.get_mpz_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    mpfr_div_ui(t, t, static_cast<unsigned long>(n), MPFR_RNDN);
    return CfStats{mean, mpfr_get_d(t, MPFR_RNDN)};
}

} // namespace diophant
