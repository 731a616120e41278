#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "diophant/ball.hpp"
#include "diophant/constants.hpp"
#include "diophant/contfrac.hpp"
#include "diophant/diagnostics.hpp"
#include "diophant/lseries.hpp"
#include "diophant/stats.hpp"

namespace diophant::cli {

using nlohmann::json;

// Shared run settings. Identical RunConfig plus identical command line must
// produce byte-identical output; nothing below may consult clocks, paths,
// or addresses.
struct RunConfig {
    int precision_bits = 256;
    std::string format = "text"; // json | csv | text
    std::string out_path;        // empty = stdout
    unsigned long long seed = 0; // reserved for randomized subcommands
};

inline int default_precision_bits() {
    if (const char* env = std::getenv("DIOPHANT_PRECISION_BITS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 64 && v <= 1 << 24) return static_cast<int>(v);
        throw std::invalid_argument("DIOPHANT_PRECISION_BITS must be an integer >= 64");
    }
    return 256;
}

// Working precision, raised when a digit request needs more bits.
inline Precision working_precision(const RunConfig& cfg, int digits = 0) {
    long need = digits > 0 ? digits * 3322L / 1000L + 64 : 0;
    return Precision::of_bits(std::max<long>(cfg.precision_bits, need));
}

// A target is either a registry constant or an exact literal (fraction,
// integer, or decimal), optionally widened to a ball by an explicit radius.
struct Target {
    std::string text;
    Ball value;
    bool is_literal = false; // exact fraction/decimal, not a registry constant
    bool widened = false;    // an explicit radius was applied
    Rational literal;        // set when is_literal
};

inline Target resolve_target(const std::string& text, Precision p,
                             const std::optional<Rational>& radius = std::nullopt) {
    for (const auto& n : registry_names()) {
        if (n == text) {
            Ball v = registry_constant(text, p);
            if (radius) v = v.inflated_by_upper(Ball::of_rational(*radius, p));
            return Target{text, v, false, radius.has_value(), Rational()};
        }
    }
    auto r = Rational::parse(text);
    if (!r) {
        std::string names;
        for (const auto& n : registry_names()) names += (names.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown target '" + text +
                                    "'; use a fraction/decimal or one of: " + names);
    }
    Ball v = radius ? Ball::of_rational_with_radius(*r, *radius, p) : Ball::of_rational(*r, p);
    return Target{text, v, true, radius.has_value(), *r};
}

// Expansion respecting exactness: a plain literal is expanded by exact
// Euclidean division (its ball image is inexact for non-dyadic values and
// would cap at the first exactly-integer Gauss iterate); everything else
// goes through certified ball expansion.
inline ContinuedFraction target_expansion(const Target& t, std::size_t max_terms) {
    if (max_terms < 1) throw std::invalid_argument("expansion needs at least 1 term");
    if (t.is_literal && !t.widened) {
        ContinuedFraction full = from_rational(t.literal);
        if (full.size() <= max_terms) return full;
        std::vector<mpz_class> qs;
        qs.reserve(max_terms - 1);
        for (std::size_t k = 1; k < max_terms; ++k) qs.push_back(full.at(k));
        return ContinuedFraction::make(full.a0(), std::move(qs), CfTermination::capped);
    }
    return expand(t.value, max_terms);
}

inline void write_output(const RunConfig& cfg, const std::string& payload) {
    if (cfg.out_path.empty()) {
        std::fwrite(payload.data(), 1, payload.size(), stdout);
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output path: " + cfg.out_path);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

namespace detail {

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string f64(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline const char* kind_name(CfClassification::Kind k) {
    switch (k) {
        case CfClassification::Kind::rational: return "rational";
        case CfClassification::Kind::periodic: return "periodic";
        default: return "unresolved";
    }
}

} // namespace detail

// ---- constants -------------------------------------------------------------

inline std::string run_constants(const RunConfig& cfg, const std::string& name, int digits) {
    if (digits < 1) throw std::invalid_argument("--digits must be >= 1");
    Precision p = working_precision(cfg, digits);
    Ball v = registry_constant(name, p);
    auto d = v.decimal_digits(digits);
    if (cfg.format == "json") {
        json j{{"certified", d.certified},
               {"digits", digits},
               {"name", name},
               {"precision_bits", p.bits},
               {"radius", v.rad_double()},
               {"value", d.text}};
        return detail::dump(j);
    }
    if (cfg.format == "csv")
        return "name,digits,certified,value\n" + name + "," + std::to_string(digits) + "," +
               std::to_string(d.certified) + "," + d.text + "\n";
    return d.text + "\n";
}

// ---- cf --------------------------------------------------------------------

inline std::string run_cf_expand(const RunConfig& cfg, const std::string& target,
                                 std::size_t terms, const std::optional<Rational>& radius) {
    if (terms < 2) throw std::invalid_argument("--terms must be >= 2");
    Precision p = working_precision(cfg);
    Target t = resolve_target(target, p, radius);
    ContinuedFraction cf = target_expansion(t, terms);
    if (cfg.format == "json") {
        json qs = json::array();
        for (std::size_t k = 1; k < cf.size(); ++k) qs.push_back(cf.at(k).get_str());
        json j{{"a0", cf.a0().get_str()},
               {"capped", !cf.terminated()},
               {"quotients", qs},
               {"target", t.text},
               {"terminated", cf.terminated()},
               {"text", cf.str()}};
        return detail::dump(j);
    }
    if (cfg.format == "csv") {
        std::string out = "k,a\n0," + cf.a0().get_str() + "\n";
        for (std::size_t k = 1; k < cf.size(); ++k)
            out += std::to_string(k) + "," + cf.at(k).get_str() + "\n";
        return out;
    }
    return cf.str() + "\n";
}

inline std::string run_cf_stats(const RunConfig& cfg, const std::string& target,
                                std::size_t terms, const std::optional<Rational>& radius) {
    if (terms < 2) throw std::invalid_argument("--terms must be >= 2");
    Precision p = working_precision(cfg);
    Target t = resolve_target(target, p, radius);
    ContinuedFraction cf = target_expansion(t, terms + 1);
    std::size_t n = cf.size() - 1;
    if (n < 2) throw std::domain_error("cf stats: expansion yields fewer than 2 quotients");
    CfStats st = cf_statistics(cf, n);
    if (cfg.format == "json") {
        json j{{"khinchine_mean", st.khinchine_mean},
               {"levy_slope", st.levy_slope},
               {"target", t.text},
               {"terms_used", n}};
        return detail::dump(j);
    }
    if (cfg.format == "csv")
        return "target,terms_used,khinchine_mean,levy_slope\n" + t.text + "," +
               std::to_string(n) + "," + detail::f64(st.khinchine_mean) + "," +
               detail::f64(st.levy_slope) + "\n";
    std::ostringstream os;
    os << "terms used:     " << n << "\n"
       << "khinchine mean: " << detail::f64(st.khinchine_mean) << "\n"
       << "levy slope:     " << detail::f64(st.levy_slope) << "\n";
    return os.str();
}

inline std::string run_cf_classify(const RunConfig& cfg, const std::string& target,
                                   std::size_t iterates, double tolerance,
                                   const std::optional<Rational>& radius) {
    Precision p = working_precision(cfg);
    Target t = resolve_target(target, p, radius);
    CfClassification c;
    if (t.is_literal && !t.widened) {
        // The target is exactly rational by construction; no ball iteration
        // could certify more than that.
        c = CfClassification{CfClassification::Kind::rational, 0, 0, 0};
    } else {
        c = classify(t.value, iterates, tolerance);
    }
    if (cfg.format == "json") {
        json j{{"evidence", c.evidence},
               {"kind", detail::kind_name(c.kind)},
               {"period", c.period},
               {"preperiod", c.preperiod},
               {"target", t.text}};
        return detail::dump(j);
    }
    if (cfg.format == "csv")
        return "target,kind,preperiod,period,evidence\n" + t.text + "," +
               detail::kind_name(c.kind) + "," + std::to_string(c.preperiod) + "," +
               std::to_string(c.period) + "," + std::to_string(c.evidence) + "\n";
    std::ostringstream os;
    os << "kind:      " << detail::kind_name(c.kind) << "\n";
    if (c.kind == CfClassification::Kind::periodic)
        os << "preperiod: " << c.preperiod << "\nperiod:    " << c.period << "\n";
    os << "evidence:  " << c.evidence << " iterates\n";
    return os.str();
}

// ---- diag ------------------------------------------------------------------

inline std::string run_diag_quality(const RunConfig& cfg, const std::string& target,
                                    std::size_t terms, const std::optional<Rational>& radius) {
    if (terms < 1) throw std::invalid_argument("--terms must be >= 1");
    Precision p = working_precision(cfg);
    Target t = resolve_target(target, p, radius);
    ContinuedFraction cf = target_expansion(t, terms + 1);
    auto cs = convergents(cf, terms);
    json rows = json::array();
    std::string csv = "index,p,q,gap_mid,gap_rad,dirichlet,hurwitz\n";
    std::ostringstream text;
    for (const auto& c : cs) {
        auto aq = approximation_quality(t.value, c);
        rows.push_back(json{{"dirichlet", to_string(aq.dirichlet_ok)},
                            {"gap_mid", aq.gap.mid_double()},
                            {"gap_rad", aq.gap.rad_double()},
                            {"hurwitz", to_string(aq.hurwitz_ok)},
                            {"index", c.index},
                            {"p", c.p.get_str()},
                            {"q", c.q.get_str()}});
        csv += std::to_string(c.index) + "," + c.p.get_str() + "," + c.q.get_str() + "," +
               detail::f64(aq.gap.mid_double()) + "," + detail::f64(aq.gap.rad_double()) + "," +
               to_string(aq.dirichlet_ok) + "," + to_string(aq.hurwitz_ok) + "\n";
        text << c.index << ": " << c.p.get_str() << "/" << c.q.get_str()
             << "  gap=" << detail::f64(aq.gap.mid_double())
             << "  dirichlet=" << to_string(aq.dirichlet_ok)
             << "  hurwitz=" << to_string(aq.hurwitz_ok) << "\n";
    }
    if (cfg.format == "json")
        return detail::dump(json{{"precision_bits", p.bits}, {"rows", rows}, {"target", t.text}});
    if (cfg.format == "csv") return csv;
    return text.str();
}

inline std::string run_diag_mu(const RunConfig& cfg, const std::string& target,
                               std::size_t terms, const std::optional<Rational>& radius) {
    Precision p = working_precision(cfg);
    Target t = resolve_target(target, p, radius);
    ContinuedFraction cf = target_expansion(t, terms + 2);
    double estimate = mu_estimate(cf, terms);
    if (cfg.format == "json")
        return detail::dump(json{{"estimate", estimate}, {"target", t.text}, {"terms", terms}});
    if (cfg.format == "csv")
        return "target,terms,estimate\n" + t.text + "," + std::to_string(terms) + "," +
               detail::f64(estimate) + "\n";
    return "mu estimate (" + std::to_string(terms) + " terms): " + detail::f64(estimate) + "\n";
}

inline std::string run_diag_roth(const RunConfig& cfg, const std::string& target,
                                 std::size_t terms, const Rational& eps,
                                 const std::string& variant,
                                 const std::optional<Rational>& radius) {
    if (terms < 1) throw std::invalid_argument("--terms must be >= 1");
    RothVariant v;
    if (variant == "roth") v = RothVariant::roth;
    else if (variant == "lange") v = RothVariant::lange;
    else throw std::invalid_argument("--variant must be roth or lange");
    Precision p = working_precision(cfg);
    Target t = resolve_target(target, p, radius);
    ContinuedFraction cf = target_expansion(t, terms + 1);
    auto cs = convergents(cf, terms);
    RothCensus census = roth_count(t.value, cs, eps, v);
    if (cfg.format == "json") {
        json per = json::array();
        for (Tri tr : census.per_convergent) per.push_back(to_string(tr));
        json j{{"epsilon", eps.str()},
               {"per_convergent", per},
               {"solutions", census.solutions},
               {"target", t.text},
               {"undecided", census.undecided},
               {"variant", variant}};
        return detail::dump(j);
    }
    if (cfg.format == "csv") {
        std::string out = "index,q,holds\n";
        for (std::size_t k = 0; k < cs.size(); ++k)
            out += std::to_string(cs[k].index) + "," + cs[k].q.get_str() + "," +
                   to_string(census.per_convergent[k]) + "\n";
        return out;
    }
    std::ostringstream os;
    os << variant << " census (eps = " << eps.str() << ", " << cs.size()
       << " convergents): " << census.solutions << " solutions, " << census.undecided
       << " undecided\n";
    return os.str();
}

// ---- audit -----------------------------------------------------------------

inline std::string run_audit(const RunConfig& cfg, long s, std::vector<unsigned long> grid,
                             const Rational& eps, double band, unsigned long cap) {
    Precision p = working_precision(cfg);
    AuditReport rep = denominator_growth_audit(s, std::move(grid), p, band, eps, cap);
    if (cfg.format == "csv") {
        std::string out =
            "x,q_bits,q_over_x_exponent,tail_upper,gap_mid,gap_rad,"
            "growth_band_s_minus_1,growth_band_s,gap_le_tail,gap_sandwich\n";
        for (const auto& r : rep.rows)
            out += std::to_string(r.x) + "," + std::to_string(r.q_bits) + "," +
                   detail::f64(r.q_over_x_exponent) + "," + r.tail_upper.str() + "," +
                   detail::f64(r.gap_mid) + "," + detail::f64(r.gap_rad) + "," +
                   (r.growth_band_s_minus_1 ? "true" : "false") + "," +
                   (r.growth_band_s ? "true" : "false") + "," + to_string(r.gap_le_tail) + "," +
                   to_string(r.gap_sandwich) + "\n";
        return out;
    }
    if (cfg.format == "text") {
        std::ostringstream os;
        os << "denominator growth audit: s = " << rep.s << ", " << rep.rows.size()
           << " grid points, " << rep.precision_bits << " bits\n";
        for (const auto& r : rep.rows)
            os << "  x=" << r.x << " q_bits=" << r.q_bits
               << " exponent=" << detail::f64(r.q_over_x_exponent)
               << " gap=" << detail::f64(r.gap_mid) << " le_tail=" << to_string(r.gap_le_tail)
               << " sandwich=" << to_string(r.gap_sandwich) << "\n";
        os << "fitted exponent " << detail::f64(rep.fitted_exponent) << " (r2 "
           << detail::f64(rep.r2) << ")\n"
           << "growth_matches_s_minus_1:   " << (rep.growth_matches_s_minus_1 ? "yes" : "no")
           << "\n"
           << "growth_matches_s_on_subset: " << (rep.growth_matches_s_on_subset ? "yes" : "no")
           << "\n"
           << "qx_within_linear_bound:     " << (rep.qx_within_linear_bound ? "yes" : "no")
           << "\n"
           << "gap_sandwich_satisfiable:   " << (rep.gap_sandwich_satisfiable ? "yes" : "no")
           << "\n";
        return os.str();
    }
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back(json{{"gap_le_tail", to_string(r.gap_le_tail)},
                            {"gap_mid", r.gap_mid},
                            {"gap_rad", r.gap_rad},
                            {"gap_sandwich", to_string(r.gap_sandwich)},
                            {"growth_band_s", r.growth_band_s},
                            {"growth_band_s_minus_1", r.growth_band_s_minus_1},
                            {"q_bits", r.q_bits},
                            {"q_over_x_exponent", r.q_over_x_exponent},
                            {"tail_upper", r.tail_upper.str()},
                            {"x", r.x}});
    json j{{"fitted_exponent", rep.fitted_exponent},
           {"hypothesis_flags",
            json{{"gap_sandwich_satisfiable", rep.gap_sandwich_satisfiable},
                 {"growth_matches_s_minus_1", rep.growth_matches_s_minus_1},
                 {"growth_matches_s_on_subset", rep.growth_matches_s_on_subset},
                 {"qx_within_linear_bound", rep.qx_within_linear_bound}}},
           {"precision_bits", rep.precision_bits},
           {"r2", rep.r2},
           {"rows", rows},
           {"s", rep.s}};
    return detail::dump(j);
}

// ---- stats -----------------------------------------------------------------

inline std::string run_stats_sieve(const RunConfig& cfg, unsigned long limit) {
    DivisorTable table = divisor_sieve(limit);
    unsigned long sum = 0;
    for (unsigned long n = 1; n <= limit; ++n) sum += table.d(n);
    mpz_class hyperbola = divisor_sum_hyperbola(limit);
    bool match = mpz_class(sum) == hyperbola;
    if (cfg.format == "csv") {
        std::string out = "n,d\n";
        for (unsigned long n = 1; n <= limit; ++n)
            out += std::to_string(n) + "," + std::to_string(table.d(n)) + "\n";
        return out;
    }
    if (cfg.format == "json") {
        json head = json::array();
        for (unsigned long n = 1; n <= std::min<unsigned long>(limit, 10); ++n)
            head.push_back(json::array({n, table.d(n)}));
        json j{{"head", head},
               {"hyperbola_sum", hyperbola.get_str()},
               {"limit", limit},
               {"match", match},
               {"sum", std::to_string(sum)}};
        return detail::dump(j);
    }
    std::ostringstream os;
    os << "divisor sieve to " << limit << ": sum " << sum << ", hyperbola checksum "
       << hyperbola.get_str() << " (" << (match ? "match" : "MISMATCH") << ")\n";
    return os.str();
}

inline std::string run_stats_density(const RunConfig& cfg, unsigned long limit,
                                     std::vector<unsigned long> grid) {
    DensitySeries series = coincidence_density(limit, std::move(grid));
    const DensityPoint& last = series.points.back();
    if (cfg.format == "csv") {
        std::string out = "limit,hits,density\n";
        for (const auto& pt : series.points)
            out += std::to_string(pt.limit) + "," + std::to_string(pt.hits) + "," +
                   detail::f64(pt.density.to_double()) + "\n";
        return out;
    }
    if (cfg.format == "json") {
        json pts = json::array();
        for (const auto& pt : series.points)
            pts.push_back(json{{"density", pt.density.str()},
                               {"density_float64", pt.density.to_double()},
                               {"hits", pt.hits},
                               {"limit", pt.limit}});
        json j{{"final_density", last.density.str()},
               {"first_members", series.first_members},
               {"points", pts}};
        return detail::dump(j);
    }
    std::ostringstream os;
    os << "coincidence density at " << last.limit << ": " << last.hits << " hits ("
       << detail::f64(last.density.to_double()) << ")\nfirst members:";
    for (unsigned long n : series.first_members) os << " " << n;
    os << "\n";
    return os.str();
}

inline std::string run_stats_factors(const RunConfig& cfg, const std::string& target,
                                     std::size_t terms, const Rational& delta,
                                     const std::optional<Rational>& radius) {
    if (terms < 1) throw std::invalid_argument("--terms must be >= 1");
    Precision p = working_precision(cfg);
    Target t = resolve_target(target, p, radius);
    ContinuedFraction cf = target_expansion(t, terms + 1);
    auto rows = convergent_factor_stats(cf, terms, delta);
    if (cfg.format == "json") {
        json jr = json::array();
        for (const auto& r : rows)
            jr.push_back(json{{"factored", r.factored},
                              {"index", r.k},
                              {"kernel_lower_ok", to_string(r.kernel_lower_ok)},
                              {"largest_prime", r.largest_prime.get_str()},
                              {"prime_lower_ok", to_string(r.prime_lower_ok)},
                              {"q", r.q.get_str()},
                              {"q_bits", r.q_bits},
                              {"squarefree_kernel", r.squarefree_kernel.get_str()}});
        return detail::dump(json{{"delta", delta.str()}, {"rows", jr}, {"target", t.text}});
    }
    if (cfg.format == "csv") {
        std::string out =
            "index,q,q_bits,factored,largest_prime,squarefree_kernel,"
            "prime_lower_ok,kernel_lower_ok\n";
        for (const auto& r : rows)
            out += std::to_string(r.k) + "," + r.q.get_str() + "," + std::to_string(r.q_bits) +
                   "," + (r.factored ? "true" : "false") + "," + r.largest_prime.get_str() + "," +
                   r.squarefree_kernel.get_str() + "," + to_string(r.prime_lower_ok) + "," +
                   to_string(r.kernel_lower_ok) + "\n";
        return out;
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        os << r.k << ": q=" << r.q.get_str() << " (" << r.q_bits << " bits) ";
        if (r.factored)
            os << "P=" << r.largest_prime.get_str() << " Q=" << r.squarefree_kernel.get_str()
               << " prime_bound=" << to_string(r.prime_lower_ok)
               << " kernel_bound=" << to_string(r.kernel_lower_ok) << "\n";
        else
            os << "unfactored\n";
    }
    return os.str();
}

// ---- lseries ----------------------------------------------------------------

inline std::string run_lseries_partial(const RunConfig& cfg, long s,
                                       std::vector<unsigned long> xs, bool exact,
                                       unsigned long cap) {
    if (xs.empty()) throw std::invalid_argument("need --limit or --grid");
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    DivisorTable table = divisor_sieve(xs.back());
    json rows = json::array();
    std::string csv = "s,x,p_decimal_digits,q_bits,value_float64\n";
    for (unsigned long x : xs) {
        PartialSum ps = conv_partial_exact(s, x, &table, cap);
        std::string num = ps.value.numerator().get_str();
        std::size_t pd = num.size() - (num[0] == '-' ? 1 : 0);
        csv += std::to_string(s) + "," + std::to_string(x) + "," + std::to_string(pd) + "," +
               std::to_string(ps.q_bits) + "," + detail::f64(ps.value.to_double()) + "\n";
        json row{{"p_decimal_digits", pd},
                 {"q_bits", ps.q_bits},
                 {"s", s},
                 {"value_float64", ps.value.to_double()},
                 {"x", x}};
        if (exact) row["exact"] = ps.value.str();
        rows.push_back(row);
    }
    if (cfg.format == "json") return detail::dump(json{{"rows", rows}});
    return csv; // csv and text share the flat table
}

} // namespace diophant::cli
