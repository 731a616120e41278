#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diophant/cli.hpp"

namespace {

diophant::Rational parse_rational_flag(const std::string& text, const char* flag) {
    auto r = diophant::Rational::parse(text);
    if (!r) throw std::invalid_argument(std::string(flag) + ": cannot parse '" + text + "'");
    return *r;
}

std::optional<diophant::Rational> parse_radius(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto r = parse_rational_flag(text, "--radius");
    if (r.sign() < 0) throw std::invalid_argument("--radius must be nonnegative");
    return r;
}

} // namespace

int main(int argc, char** argv) {
    using namespace diophant;

    CLI::App app{"certified continued-fraction and L-series diagnostics"};
    app.require_subcommand(1);

    cli::RunConfig cfg;
    try {
        cfg.precision_bits = cli::default_precision_bits();
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    app.add_option("--precision", cfg.precision_bits, "working precision in bits (>= 64)");
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", cfg.out_path, "write output to this path instead of stdout");
    app.add_option("--seed", cfg.seed, "seed for randomized subcommands (reserved)");

    std::string name;
    std::string target;
    std::string radius_text;
    std::string eps_text = "1/2";
    std::string audit_eps_text = "1/10";
    std::string delta_text = "1/2";
    std::string variant = "roth";
    int digits = 50;
    std::size_t terms = 20;
    std::size_t iterates = 64;
    double tolerance = 0.0;
    double band = 0.15;
    long s = 2;
    unsigned long limit = 10000;
    unsigned long cap = 1000000;
    bool exact = false;
    std::vector<unsigned long> grid;
    std::string out;

    auto* constants = app.add_subcommand("constants", "print a registry constant");
    constants->add_option("name", name, "constant name")->required();
    constants->add_option("--digits", digits, "decimal digits to print");
    constants->callback([&] { out = cli::run_constants(cfg, name, digits); });

    auto* cf = app.add_subcommand("cf", "continued-fraction operations");
    cf->require_subcommand(1);
    auto* cf_expand = cf->add_subcommand("expand", "partial-quotient expansion");
    cf_expand->add_option("target", target, "constant name or exact literal")->required();
    cf_expand->add_option("--terms", terms, "maximum terms including a0");
    cf_expand->add_option("--radius", radius_text, "widen a literal target by this radius");
    cf_expand->callback(
        [&] { out = cli::run_cf_expand(cfg, target, terms, parse_radius(radius_text)); });
    auto* cf_stats = cf->add_subcommand("stats", "quotient statistics");
    cf_stats->add_option("target", target)->required();
    cf_stats->add_option("--terms", terms);
    cf_stats->add_option("--radius", radius_text);
    cf_stats->callback(
        [&] { out = cli::run_cf_stats(cfg, target, terms, parse_radius(radius_text)); });
    auto* cf_classify = cf->add_subcommand("classify", "rational/periodic/unresolved");
    cf_classify->add_option("target", target)->required();
    cf_classify->add_option("--terms", iterates, "Gauss iterates to examine");
    cf_classify->add_option("--epsilon", tolerance, "overlap slack for period detection");
    cf_classify->add_option("--radius", radius_text);
    cf_classify->callback([&] {
        out = cli::run_cf_classify(cfg, target, iterates, tolerance, parse_radius(radius_text));
    });

    auto* diag = app.add_subcommand("diag", "approximation diagnostics");
    diag->require_subcommand(1);
    auto* diag_quality = diag->add_subcommand("quality", "convergents vs classical thresholds");
    diag_quality->add_option("target", target)->required();
    diag_quality->add_option("--terms", terms);
    diag_quality->add_option("--radius", radius_text);
    diag_quality->callback(
        [&] { out = cli::run_diag_quality(cfg, target, terms, parse_radius(radius_text)); });
    auto* diag_mu = diag->add_subcommand("mu", "irrationality-measure estimate");
    diag_mu->add_option("target", target)->required();
    diag_mu->add_option("--terms", terms);
    diag_mu->add_option("--radius", radius_text);
    diag_mu->callback(
        [&] { out = cli::run_diag_mu(cfg, target, terms, parse_radius(radius_text)); });
    auto* diag_roth = diag->add_subcommand("roth", "exponent-threshold census");
    diag_roth->add_option("target", target)->required();
    diag_roth->add_option("--terms", terms);
    diag_roth->add_option("--epsilon", eps_text, "threshold exponent offset (rational)");
    diag_roth->add_option("--variant", variant)->check(CLI::IsMember({"roth", "lange"}));
    diag_roth->add_option("--radius", radius_text);
    diag_roth->callback([&] {
        out = cli::run_diag_roth(cfg, target, terms, parse_rational_flag(eps_text, "--epsilon"),
                                 variant, parse_radius(radius_text));
    });

    auto* audit = app.add_subcommand("audit", "denominator-growth audit of the L-series square");
    audit->add_option("--s", s, "series exponent (>= 2)");
    audit->add_option("--grid", grid, "partial-sum cutoffs")->required()->delimiter(',');
    audit->add_option("--epsilon", audit_eps_text, "sandwich exponent slack (rational)");
    audit->add_option("--band", band, "log-log residual band");
    audit->add_option("--cap", cap, "exact-mode cutoff cap");
    audit->callback([&] {
        out = cli::run_audit(cfg, s, grid, parse_rational_flag(audit_eps_text, "--epsilon"),
                             band, cap);
    });

    auto* stats = app.add_subcommand("stats", "divisor and factorization statistics");
    stats->require_subcommand(1);
    auto* stats_sieve = stats->add_subcommand("sieve", "divisor-count sieve with checksum");
    stats_sieve->add_option("--limit", limit);
    stats_sieve->callback([&] { out = cli::run_stats_sieve(cfg, limit); });
    auto* stats_density = stats->add_subcommand("density", "divisor coincidence density");
    stats_density->add_option("--limit", limit);
    stats_density->add_option("--grid", grid, "checkpoints")->delimiter(',');
    stats_density->callback([&] { out = cli::run_stats_density(cfg, limit, grid); });
    auto* stats_factors = stats->add_subcommand("factors", "convergent denominator factors");
    stats_factors->add_option("target", target)->required();
    stats_factors->add_option("--terms", terms);
    stats_factors->add_option("--delta", delta_text, "kernel bound exponent (rational in (0,1))");
    stats_factors->add_option("--radius", radius_text);
    stats_factors->callback([&] {
        out = cli::run_stats_factors(cfg, target, terms,
                                     parse_rational_flag(delta_text, "--delta"),
                                     parse_radius(radius_text));
    });

    auto* lseries = app.add_subcommand("lseries", "exact partial sums of the L-series square");
    lseries->require_subcommand(1);
    auto* ls_partial = lseries->add_subcommand("partial", "exact rearranged partial sums");
    ls_partial->add_option("--s", s);
    ls_partial->add_option("--limit", limit);
    ls_partial->add_option("--grid", grid)->delimiter(',');
    ls_partial->add_flag("--exact", exact, "include the exact fraction in JSON rows");
    ls_partial->add_option("--cap", cap);
    ls_partial->callback([&] {
        std::vector<unsigned long> xs = grid.empty() ? std::vector<unsigned long>{limit} : grid;
        out = cli::run_lseries_partial(cfg, s, xs, exact, cap);
    });

    // Let global flags (--format, --out, ...) appear after the subcommand.
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* node) {
        for (auto* sub : node->get_subcommands(nullptr)) {
            sub->fallthrough();
            enable_fallthrough(sub);
        }
    };
    enable_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const diophant::PrecisionExhausted& e) {
        std::fprintf(stderr, "precision exhausted: %s\n", e.what());
        return 2;
    } catch (const diophant::ResourceCapExceeded& e) {
        std::fprintf(stderr, "resource cap exceeded: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        cli::write_output(cfg, out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
