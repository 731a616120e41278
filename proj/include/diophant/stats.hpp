#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "diophant/ball.hpp"
#include "diophant/contfrac.hpp"
#include "diophant/errors.hpp"
#include "diophant/rational.hpp"

namespace diophant {

// Dense table of divisor counts d(1)..d(limit).
struct DivisorTable {
    unsigned long limit = 0;
    std::vector<std::uint32_t> counts; // counts[n], counts[0] unused

    unsigned long d(unsigned long n) const {
        if (n < 1 || n > limit) throw std::out_of_range("DivisorTable: index");
        return counts[n];
    }
};

inline DivisorTable divisor_sieve(unsigned long limit, unsigned long cap = 100000000UL) {
    if (limit < 1) throw std::domain_error("divisor_sieve: limit must be >= 1");
    if (limit > cap) throw ResourceCapExceeded("divisor_sieve: limit exceeds cap");
    DivisorTable t;
    t.limit = limit;
    t.counts.assign(limit + 1, 0);
    for (unsigned long k = 1; k <= limit; ++k)
        for (unsigned long m = k; m <= limit; m += k) ++t.counts[m];
    return t;
}

// Independent check value for the sieve: sum_{n<=limit} d(n) = sum_k floor(limit/k).
inline mpz_class divisor_sum_hyperbola(unsigned long limit) {
    mpz_class total(0);
    for (unsigned long k = 1; k <= limit; ++k) total += limit / k;
    return total;
}

struct DensityPoint {
    unsigned long limit;
    unsigned long hits; // n <= limit with d(4n+1) = d(4n+3)
    Rational density;   // hits / limit
};

struct DensitySeries {
    std::vector<DensityPoint> points;
    std::vector<unsigned long> first_members; // first 10 members of the coincidence set
};

// Measured density of the coincidence set {n : d(4n+1) = d(4n+3)} at each
// checkpoint. The checkpoints are deduplicated, sorted, and clipped to limit.
inline DensitySeries coincidence_density(unsigned long limit,
                                         std::vector<unsigned long> grid,
                                         unsigned long sieve_cap = 100000000UL) {
    if (limit < 1) throw std::domain_error("coincidence_density: limit must be >= 1");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    while (!grid.empty() && grid.back() > limit) grid.pop_back();
    if (grid.empty() || grid.back() != limit) grid.push_back(limit);
    if (!grid.empty() && grid.front() == 0) grid.erase(grid.begin());

    DivisorTable table = divisor_sieve(4 * limit + 3, sieve_cap);
    DensitySeries out;
    unsigned long hits = 0;
    std::size_t gi = 0;
    for (unsigned long n = 1; n <= limit; ++n) {
        if (table.d(4 * n + 1) == table.d(4 * n + 3)) {
            ++hits;
            if (out.first_members.size() < 10) out.first_members.push_back(n);
        }
        while (gi < grid.size() && grid[gi] == n) {
            out.points.push_back(DensityPoint{n, hits, Rational(hits, n)});
            ++gi;
        }
    }
    return out;
}

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs (fixed base set proven
// sufficient below 3.3e24).
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod_u64(a % n, d, n);
        if (x <= 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

inline bool is_prime_mpz(const mpz_class& n) {
    if (mpz_fits_ulong_p(n.get_mpz_t()) && sizeof(unsigned long) == 8)
        return is_prime_u64(n.get_ui());
    // beyond 64 bits: GMP's BPSW + Miller-Rabin battery
    return mpz_probab_prime_p(n.get_mpz_t(), 50) > 0;
}

// Brent-cycle Pollard rho; returns a nontrivial factor of composite odd n,
// or 0 if the iteration budget runs out.
inline mpz_class pollard_rho(const mpz_class& n, unsigned long& salt,
                             unsigned long max_rounds = 1UL << 22) {
    if (n % 2 == 0) return 2;
    for (int attempt = 0; attempt < 32; ++attempt) {
        mpz_class c = 1 + mpz_class(++salt) % (n - 1);
        mpz_class y = mpz_class(salt * 2654435761UL) % n, g = 1, q = 1, x, ys;
        unsigned long m = 128, r = 1;
        while (g == 1 && r <= max_rounds) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                unsigned long blk = std::min<unsigned long>(m, r - k);
                for (unsigned long i = 0; i < blk; ++i) {
                    y = (y * y + c) % n;
                    q = q * (x > y ? x - y : y - x) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack one step at a time
            do {
                ys = (ys * ys + c) % n;
                mpz_class diff = x > ys ? x - ys : ys - x;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n && g != 1) return g;
    }
    return 0;
}

// Exact factorization: trial division, then recursive rho on the cofactor.
// Throws ResourceCapExceeded when rho gives up. The product of the returned
// powers is verified to equal n.
inline std::map<mpz_class, unsigned long> factorize(mpz_class n) {
    if (n < 1) throw std::domain_error("factorize: n must be >= 1");
    std::map<mpz_class, unsigned long> out;
    mpz_class original = n;
    for (unsigned long p = 2; p < 10000 && n > 1; p = (p == 2 ? 3 : p + 2)) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            unsigned long e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                n /= p;
                ++e;
            }
            out[mpz_class(p)] += e;
        }
        if (mpz_class(p) * p > n) break;
    }
    std::vector<mpz_class> stack;
    if (n > 1) stack.push_back(n);
    unsigned long salt = 0;
    while (!stack.empty()) {
        mpz_class m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime_mpz(m)) {
            out[m] += 1;
            continue;
        }
        // perfect powers first (rho stalls on them)
        if (mpz_perfect_square_p(m.get_mpz_t())) {
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
            stack.push_back(r);
            stack.push_back(r);
            continue;
        }
        mpz_class f = pollard_rho(m, salt);
        if (f == 0) throw ResourceCapExceeded("factorize: rho budget exhausted");
        stack.push_back(f);
        stack.push_back(m / f);
    }
    mpz_class check(1);
    for (const auto& [p, e] : out)
        for (unsigned long i = 0; i < e; ++i) check *= p;
    if (check != original) throw std::logic_error("factorize: verification product mismatch");
    return out;
}

} // namespace detail

struct FactorProfile {
    mpz_class largest_prime;     // P(n)
    mpz_class squarefree_kernel; // Q(n) = product of distinct primes
    bool trivial = false;        // n = 1 convention (1, 1)
};

inline FactorProfile factor_profile(const mpz_class& n) {
    if (n < 1) throw std::domain_error("factor_profile: n must be >= 1");
    if (n == 1) return FactorProfile{1, 1, true};
    auto fs = detail::factorize(n);
    FactorProfile out;
    out.squarefree_kernel = 1;
    for (const auto& [p, e] : fs) {
        out.squarefree_kernel *= p;
        out.largest_prime = p; // map is ordered ascending
    }
    return out;
}

// Per-convergent factor statistics with the two denominator lower-bound
// tests: P(q) >= exp(log q / log log q) and Q(q) >= q/(log q)^(1-delta).
// Both are evaluated in certified arithmetic on the log scale.
struct ConvergentFactorRow {
    std::size_t k;
    mpz_class q;
    std::size_t q_bits;
    mpz_class largest_prime;
    mpz_class squarefree_kernel;
    Tri prime_lower_ok = Tri::undecided;  // P(q) bound; undecided when skipped
    Tri kernel_lower_ok = Tri::undecided; // Q(q) bound at the given delta
    bool factored = false;
};

inline std::vector<ConvergentFactorRow> convergent_factor_stats(
    const ContinuedFraction& cf, std::size_t n, const Rational& delta = Rational(1, 2),
    std::size_t q_bit_cap = 128) {
    if (delta.sign() <= 0 || delta >= Rational(1))
        throw std::domain_error("convergent_factor_stats: delta must be in (0,1)");
    auto cs = convergents(cf, n);
    std::vector<ConvergentFactorRow> rows;
    rows.reserve(cs.size());
    Precision prec = Precision::of_bits(192);
    for (const auto& c : cs) {
        ConvergentFactorRow row;
        row.k = c.index;
        row.q = c.q;
        row.q_bits = mpz_sizeinbase(c.q.get_mpz_t(), 2);
        if (row.q_bits > q_bit_cap) {
            rows.push_back(std::move(row));
            continue;
        }
        FactorProfile fp;
        try {
            fp = factor_profile(c.q);
        } catch (const ResourceCapExceeded&) {
            rows.push_back(std::move(row));
            continue;
        }
        row.factored = true;
        row.largest_prime = fp.largest_prime;
        row.squarefree_kernel = fp.squarefree_kernel;
        if (c.q >= 3) {
            Ball lq = Ball::of_int(c.q, prec).log();
            Ball llq = lq.log();
            // P >= e^(log q/log log q)  <=>  log P * log log q >= log q
            Ball lhs1 = Ball::of_int(fp.largest_prime, prec).log() * llq;
            row.prime_lower_ok = tri_not(Ball::less(lhs1, lq));
            // Q >= q/(log q)^(1-delta)  <=>  log Q + (1-delta) log log q >= log q
            Ball lhs2 = Ball::of_int(fp.squarefree_kernel, prec).log() +
                        llq.mul_rational(Rational(1) - delta);
            row.kernel_lower_ok = tri_not(Ball::less(lhs2, lq));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct GrowthSample {
    unsigned long x;
    double log2_q; // log2 of the measured denominator (fractional bits)
};

struct GrowthFit {
    double fitted_exponent; // least-squares slope of log2 q against log2 x
    double r2;
};

inline GrowthFit denominator_growth(const std::vector<GrowthSample>& samples) {
    if (samples.size() < 2) throw std::domain_error("denominator_growth: need >= 2 samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].x <= samples[i - 1].x)
            throw std::domain_error("denominator_growth: x must be strictly increasing");
    double n = static_cast<double>(samples.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : samples) {
        double lx = std::log2(static_cast<double>(s.x));
        sx += lx;
        sy += s.log2_q;
        sxx += lx * lx;
        sxy += lx * s.log2_q;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::domain_error("denominator_growth: degenerate x values");
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    double mean_y = sy / n, ss_res = 0, ss_tot = 0;
    for (const auto& s : samples) {
        double lx = std::log2(static_cast<double>(s.x));
        double e = s.log2_q - (slope * lx + intercept);
        ss_res += e * e;
        double d = s.log2_q - mean_y;
        ss_tot += d * d;
    }
    double r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return GrowthFit{slope, r2};
}

} // namespace diophant
