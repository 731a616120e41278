#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "diophant/ball.hpp"
#include "diophant/errors.hpp"
#include "diophant/rational.hpp"
#include "diophant/stats.hpp"

namespace diophant {

// Nonprincipal Dirichlet character mod 4.
inline int chi_mod4(unsigned long n) {
    if (n == 0) throw std::domain_error("chi_mod4: n must be >= 1");
    switch (n % 4) {
        case 1: return 1;
        case 3: return -1;
        default: return 0;
    }
}

struct CharacterMod4 {
    int value(unsigned long n) const { return chi_mod4(n); }
    int operator()(unsigned long n) const { return chi_mod4(n); }
};

// Exact divisor count by trial factorization: d(n) = prod (e_i + 1).
inline unsigned long divisor_count(unsigned long n) {
    if (n == 0) throw std::domain_error("divisor_count: n must be >= 1");
    auto fs = detail::factorize(mpz_class(n));
    unsigned long d = 1;
    for (const auto& [p, e] : fs) d *= e + 1;
    return d;
}

// Convolution coefficient of the squared character series computed the
// slow way: sum over divisors of chi(d) chi(n/d). Equals d(n) chi(n).
inline long autoconv_coefficient(unsigned long n) {
    if (n == 0) throw std::domain_error("autoconv_coefficient: n must be >= 1");
    long acc = 0;
    for (unsigned long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        unsigned long e = n / d;
        acc += chi_mod4(d) * chi_mod4(e);
        if (d != e) acc += chi_mod4(e) * chi_mod4(d);
    }
    return acc;
}

// ---- character L-value at positive integer s ------------------------------

// Alternating partial sum sum_{k<cutoff} (-1)^k (2k+1)^(-s) with the
// first-omitted-term remainder.
inline Ball beta_value_plain(long s, Precision p, unsigned long cutoff) {
    if (s < 1) throw std::domain_error("beta_value_plain: s must be >= 1");
    if (cutoff < 1) throw std::domain_error("beta_value_plain: cutoff must be >= 1");
    mpfr_prec_t wp = p.bits + 32;
    detail::Mpfr acc(wp), term(wp);
    mpfr_set_zero(acc, 1);
    bool fits_u64 = true;
    {
        // (2*cutoff-1)^s must fit an unsigned 64-bit value for the fast path
        mpz_class probe;
        mpz_ui_pow_ui(probe.get_mpz_t(), 2 * cutoff + 1, static_cast<unsigned long>(s));
        fits_u64 = mpz_fits_ulong_p(probe.get_mpz_t()) != 0;
    }
    for (unsigned long k = 0; k < cutoff; ++k) {
        unsigned long odd = 2 * k + 1;
        if (fits_u64) {
            unsigned long den = odd;
            for (long i = 1; i < s; ++i) den *= odd;
            mpfr_set_ui(term, den, MPFR_RNDN);
            mpfr_ui_div(term, 1, term, MPFR_RNDN);
        } else {
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), odd, static_cast<unsigned long>(s));
            mpfr_set_z(term, den.get_mpz_t(), MPFR_RNDN);
            mpfr_ui_div(term, 1, term, MPFR_RNDN);
        }
        if (k % 2)
            mpfr_sub(acc, acc, term, MPFR_RNDN);
        else
            mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    // every term and add rounds to nearest at wp bits with |acc| <= 1,
    // so the accumulated rounding stays below cutoff * 2^(3 - wp)
    detail::Mpfr rb(detail::kRadiusPrec);
    mpfr_set_ui_2exp(rb, cutoff, 3 - wp, MPFR_RNDU);
    Ball out = Ball::of_midrad(acc, rb, p);
    mpz_class omitted;
    mpz_ui_pow_ui(omitted.get_mpz_t(), 2 * cutoff + 1, static_cast<unsigned long>(s));
    return out.inflated_by_upper(Ball::of_rational(Rational(1, omitted), p));
}

// Accelerated alternating summation (Cohen, Rodriguez Villegas, Zagier).
// The terms (2k+1)^(-s) are moments of a positive measure on [0,1], so the
// scheme's error after n terms is at most 2 a_0 / d_n <= 4 (3+sqrt(8))^(-n);
// the radius gets 4/d_n added, which over-covers that bound.
inline Ball beta_value_accelerated(long s, Precision p) {
    if (s < 1) throw std::domain_error("beta_value_accelerated: s must be >= 1");
    Precision wp = Precision::of_bits(p.bits + 64);
    std::size_t n = static_cast<std::size_t>((p.bits + 24) * 0.6931472 / 1.7627472) + 8;
    Ball d = Ball::of_int(8L, wp).sqrt().add_rational(Rational(3)).pow_ui(n);
    d = (d + d.recip()).mul_rational(Rational(1, 2));
    Ball b = Ball::of_int(-1L, wp);
    Ball c = -d;
    Ball acc(wp);
    for (std::size_t k = 0; k < n; ++k) {
        c = b - c;
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2 * k + 1, static_cast<unsigned long>(s));
        acc = acc + c.mul_rational(Rational(1, den));
        mpz_class num = mpz_class(2) * (k + n) * (mpz_class(k) - n);
        mpz_class divd = mpz_class(2 * k + 1) * (k + 1);
        b = b.mul_rational(Rational(num, divd));
    }
    Ball result = (acc / d).inflated_by_upper(Ball::of_int(4L, wp) / d);
    return result.at_precision(p);
}

// Certified enclosure of L(s, chi) = sum chi(n) n^(-s).
inline Ball beta_value(long s, Precision p) { return beta_value_accelerated(s, p); }

// Basel-series enclosure: direct partial sum of 1/n^2 plus the exact
// integral bracket [1/(cutoff+1), 1/cutoff] for the tail.
inline Ball zeta2_series(unsigned long cutoff, Precision p) {
    if (cutoff < 1) throw std::domain_error("zeta2_series: cutoff must be >= 1");
    if (cutoff >= (1UL << 31)) throw ResourceCapExceeded("zeta2_series: cutoff too large");
    mpfr_prec_t wp = p.bits + 32;
    detail::Mpfr acc(wp), term(wp);
    mpfr_set_zero(acc, 1);
    for (unsigned long k = 1; k <= cutoff; ++k) {
        mpfr_set_ui(term, k * k, MPFR_RNDN);
        mpfr_ui_div(term, 1, term, MPFR_RNDN);
        mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    detail::Mpfr rb(detail::kRadiusPrec);
    mpfr_set_ui_2exp(rb, cutoff, 3 - wp, MPFR_RNDU);
    Ball partial = Ball::of_midrad(acc, rb, p);
    Rational lo(1, mpz_class(cutoff) + 1), hi(1, mpz_class(cutoff));
    Rational mid = (lo + hi) / Rational(2);
    Rational rad = (hi - lo) / Rational(2);
    return partial + Ball::of_rational_with_radius(mid, rad, p);
}

// ---- exact partial sums of the squared series ------------------------------

struct PartialSum {
    long s;
    unsigned long x;
    Rational value;     // sum_{n<=x} d(n) chi(n) n^(-s), exact and reduced
    std::size_t q_bits; // bit length of the reduced denominator
};

namespace detail {

// balanced pairwise reduction keeps the rational additions near-equal size
inline mpq_class tree_sum(std::vector<mpq_class>& terms) {
    if (terms.empty()) return mpq_class(0);
    while (terms.size() > 1) {
        std::size_t half = (terms.size() + 1) / 2;
        for (std::size_t i = 0; 2 * i + 1 < terms.size(); ++i)
            terms[i] = terms[2 * i] + terms[2 * i + 1];
        if (terms.size() % 2) terms[half - 1] = terms.back();
        terms.resize(half);
    }
    return terms[0];
}

inline const DivisorTable* ensure_table(unsigned long x, const DivisorTable* table,
                                        std::optional<DivisorTable>& local) {
    if (table) {
        if (table->limit < x) throw std::domain_error("divisor table smaller than cutoff");
        return table;
    }
    if (x > 1000) {
        local = divisor_sieve(x);
        return &*local;
    }
    return nullptr;
}

} // namespace detail

inline PartialSum conv_partial_exact(long s, unsigned long x,
                                     const DivisorTable* table = nullptr,
                                     unsigned long cap = 1000000UL) {
    if (s < 2) throw std::domain_error("conv_partial_exact: s must be >= 2");
    if (x < 1) throw std::domain_error("conv_partial_exact: x must be >= 1");
    if (x > cap) throw ResourceCapExceeded("conv_partial_exact: cutoff exceeds exact-mode cap");
    std::optional<DivisorTable> local;
    const DivisorTable* t = detail::ensure_table(x, table, local);
    std::vector<mpq_class> terms;
    terms.reserve(x / 2 + 1);
    for (unsigned long n = 1; n <= x; n += 2) {
        unsigned long dn = t ? t->d(n) : divisor_count(n);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), n, static_cast<unsigned long>(s));
        mpq_class q(n % 4 == 1 ? mpz_class(dn) : mpz_class(-static_cast<long>(dn)), den);
        q.canonicalize();
        terms.push_back(std::move(q));
    }
    mpq_class total = detail::tree_sum(terms);
    Rational value(mpz_class(total.get_num()), mpz_class(total.get_den()));
    return PartialSum{s, x, value,
                      mpz_sizeinbase(value.denominator().get_mpz_t(), 2)};
}

enum class RegroupMode { paired, coincidence_only };

// Rearranged partial sum over residue pairs (4n+1, 4n+3). `paired` keeps
// every complete pair; `coincidence_only` keeps pairs with equal divisor
// counts, where the pair collapses to a single numerator.
inline Rational regrouped_partial(long s, unsigned long x, RegroupMode mode,
                                  const DivisorTable* table = nullptr) {
    if (s < 2) throw std::domain_error("regrouped_partial: s must be >= 2");
    std::optional<DivisorTable> local;
    const DivisorTable* t = detail::ensure_table(x, table, local);
    auto dof = [&](unsigned long n) { return t ? t->d(n) : divisor_count(n); };
    std::vector<mpq_class> terms;
    for (unsigned long n = 0; 4 * n + 3 <= x; ++n) {
        unsigned long a = 4 * n + 1, b = 4 * n + 3;
        unsigned long da = dof(a), db = dof(b);
        mpz_class as, bs;
        mpz_ui_pow_ui(as.get_mpz_t(), a, static_cast<unsigned long>(s));
        mpz_ui_pow_ui(bs.get_mpz_t(), b, static_cast<unsigned long>(s));
        if (mode == RegroupMode::coincidence_only && da != db) continue;
        // d(a)/a^s - d(b)/b^s over the common denominator; for coincident
        // pairs the numerator is d(a) (b^s - a^s)
        mpz_class num = mode == RegroupMode::coincidence_only
                            ? mpz_class(da * (bs - as))
                            : mpz_class(da * bs - db * as);
        mpq_class q(num, as * bs);
        q.canonicalize();
        terms.push_back(std::move(q));
    }
    mpq_class total = detail::tree_sum(terms);
    return Rational(mpz_class(total.get_num()), mpz_class(total.get_den()));
}

// Rigorous tail bound from d(n) <= 2 sqrt(n):
//   |sum_{n>x} d(n) chi(n) n^(-s)| <= sum_{n>x} 2 n^(1/2-s)
//                                  <= 4 x^(3/2-s)/(2s-3)
//                                  <= 4 ceil(sqrt(x)) / ((2s-3) x^(s-1)).
inline Rational tail_bound(long s, unsigned long x) {
    if (s < 2) throw std::domain_error("tail_bound: s must be >= 2");
    if (x < 16) throw std::domain_error("tail_bound: x must be >= 16");
    mpz_class xz(x), root;
    mpz_sqrt(root.get_mpz_t(), xz.get_mpz_t());
    if (root * root != xz) root += 1;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), x, static_cast<unsigned long>(s - 1));
    den *= 2 * s - 3;
    return Rational(4 * root, den);
}

// ---- closed forms ----------------------------------------------------------

struct ExactNumberTable {
    std::map<unsigned long, Rational> bernoulli; // index -> B_index (all indices)
    std::map<unsigned long, mpz_class> euler;    // 2n -> E_2n (secant numbers)
};

enum class NumberKind { bernoulli, euler };

inline ExactNumberTable exact_number_table(NumberKind kind, unsigned long max_index) {
    if (max_index % 2 != 0) throw std::domain_error("exact_number_table: max_index must be even");
    ExactNumberTable t;
    if (kind == NumberKind::bernoulli) {
        // sum_{k<=m} C(m+1,k) B_k = 0  =>  B_m = -(1/(m+1)) sum_{k<m} C(m+1,k) B_k
        std::vector<Rational> b(max_index + 1, Rational(0));
        b[0] = Rational(1);
        for (unsigned long m = 1; m <= max_index; ++m) {
            Rational sum(0);
            mpz_class binom(1); // C(m+1, 0)
            for (unsigned long k = 0; k < m; ++k) {
                sum += b[k] * Rational(binom);
                binom = binom * (m + 1 - k) / (k + 1);
            }
            b[m] = -sum / Rational(mpz_class(m + 1));
        }
        for (unsigned long m = 0; m <= max_index; ++m) t.bernoulli[m] = b[m];
    } else {
        // sum_{k<=n} C(2n,2k) E_2k = 0  =>  E_2n = -sum_{k<n} C(2n,2k) E_2k
        std::vector<mpz_class> e(max_index / 2 + 1);
        e[0] = 1;
        for (unsigned long nn = 1; nn <= max_index / 2; ++nn) {
            mpz_class sum(0), binom;
            for (unsigned long k = 0; k < nn; ++k) {
                mpz_bin_uiui(binom.get_mpz_t(), 2 * nn, 2 * k);
                sum += binom * e[k];
            }
            e[nn] = -sum;
        }
        for (unsigned long nn = 0; nn <= max_index / 2; ++nn) t.euler[2 * nn] = e[nn];
    }
    return t;
}

enum class ClosedFormKind { zeta_even, beta_odd };

struct ClosedForm {
    Rational coefficient;
    unsigned long pi_power;
};

// zeta(2n) = c pi^(2n) with c = (-1)^(n+1) 4^n B_2n / (2 (2n)!);
// L(2n+1, chi) = c pi^(2n+1) with c = (-1)^n E_2n / (2^(2n+2) (2n)!).
inline ClosedForm closed_form(ClosedFormKind kind, unsigned long n) {
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), 2 * n);
    if (kind == ClosedFormKind::zeta_even) {
        if (n < 1) throw std::domain_error("closed_form: zeta_even needs n >= 1");
        ExactNumberTable t = exact_number_table(NumberKind::bernoulli, 2 * n);
        mpz_class four_n = mpz_class(1) << (2 * n);
        Rational c = t.bernoulli.at(2 * n) * Rational(four_n, 2 * fact);
        if (n % 2 == 0) c = -c;
        return ClosedForm{c, 2 * n};
    }
    ExactNumberTable t = exact_number_table(NumberKind::euler, 2 * n);
    mpz_class den = (mpz_class(1) << (2 * n + 2)) * fact;
    Rational c(t.euler.at(2 * n), den);
    if (n % 2 == 1) c = -c;
    return ClosedForm{c, 2 * n + 1};
}

// Ball value of a closed form: coefficient times pi^power.
inline Ball closed_form_value(ClosedFormKind kind, unsigned long n, Precision p) {
    ClosedForm f = closed_form(kind, n);
    Precision wp = Precision::of_bits(p.bits + 32);
    return Ball::pi(wp).pow_ui(f.pi_power).mul_rational(f.coefficient).at_precision(p);
}

} // namespace diophant
