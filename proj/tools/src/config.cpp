#include "chowla_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "chowla/circle.hpp"
#include "chowla/entropy.hpp"
#include "chowla/sieve.hpp"

namespace chowla_cli {

namespace {

// Largest window span (x - x/omega) a scan subcommand will accept; beyond
// this a single run stops being a desk experiment.
constexpr std::uint64_t kMaxWindowSpan = 1ull << 33;

double parse_double_field(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": '" + s + "' is not a number");
    }
}

std::uint64_t parse_u64_field(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": '" + s + "' is not a nonnegative integer");
    }
}

chowla::MultSpec load_character_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("charfile: cannot open '" + path + "'");
    std::uint64_t q = 0;
    if (!(f >> q) || q == 0)
        throw std::invalid_argument("charfile '" + path + "': first token must be the modulus q >= 1");
    std::vector<chowla::cplx> table(q);
    for (std::uint64_t r = 0; r < q; ++r) {
        double re = 0.0, im = 0.0;
        if (!(f >> re >> im))
            throw std::invalid_argument("charfile '" + path + "': expected " + std::to_string(q) +
                                        " lines of 're im' after the modulus");
        table[r] = {re, im};
    }
    return chowla::MultSpec::dirichlet_character(q, std::move(table));
}

std::uint64_t to_u64_floor(double v) {
    if (!(v >= 0.0)) return 0;
    if (v >= 9.0e18) return 9'000'000'000'000'000'000ull;
    return static_cast<std::uint64_t>(std::floor(v));
}

}  // namespace

chowla::MultSpec parse_selector(const std::string& sel) {
    using chowla::MultSpec;
    if (sel == "liouville") return MultSpec::liouville();
    if (sel == "mobius") return MultSpec::mobius();
    if (sel == "mobius-squared") return MultSpec::mobius_squared();
    if (sel == "one") return MultSpec::constant_one();
    auto starts = [&](const char* p) { return sel.rfind(p, 0) == 0; };
    if (starts("twist:"))
        return MultSpec::archimedean_twist(parse_double_field(sel.substr(6), "twist"));
    if (starts("principal:"))
        return MultSpec::principal_character(parse_u64_field(sel.substr(10), "principal"));
    if (starts("charfile:")) return load_character_file(sel.substr(9));
    if (starts("random:")) {
        std::string rest = sel.substr(7);
        auto pos = rest.rfind(':');
        if (pos == std::string::npos || pos == 0 || pos + 1 == rest.size())
            throw std::invalid_argument("random selector must look like random:<mean>:<seed>");
        std::uint64_t seed = parse_u64_field(rest.substr(pos + 1), "random seed");
        return chowla::sample_random_mult(parse_selector(rest.substr(0, pos)), seed);
    }
    throw std::invalid_argument(
        "unknown function selector '" + sel +
        "' (expected liouville | mobius | mobius-squared | one | twist:<t> | principal:<q> | "
        "charfile:<path> | random:<mean>:<seed>)");
}

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> bad;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    auto check_sel = [&](const char* name, const std::string& s, bool must_sign = false,
                         bool must_char = false) {
        try {
            chowla::MultSpec m = parse_selector(s);
            if (must_sign)
                need(m.sign_valued(), std::string(name) + ": '" + s + "' is not sign-valued");
            if (must_char)
                need(m.kind() == chowla::MultSpec::Kind::Character,
                     std::string(name) + ": '" + s +
                         "' must be a character (principal:<q> or charfile:<path>)");
        } catch (const std::exception& e) {
            bad.push_back(std::string(name) + ": " + e.what());
        }
    };

    const std::string& sc = cfg.subcommand;
    const bool uses_window =
        sc == "correlate" || sc == "correlate3" || sc == "sign-patterns" || sc == "entropy-scan";
    const bool uses_x = uses_window || sc == "distance";
    const bool uses_params = sc == "correlate" || sc == "entropy-scan" ||
                             sc == "concentration" || sc == "circle-scan" ||
                             sc == "fourth-moment";
    const bool uses_eps = sc == "entropy-scan" || sc == "concentration" || sc == "circle-scan" ||
                          sc == "fourth-moment";
    const bool uses_pair = sc == "correlate" || sc == "entropy-scan" || sc == "concentration" ||
                           sc == "circle-scan" || sc == "fourth-moment";
    const bool uses_weighting = sc == "correlate" || sc == "correlate3" || sc == "sign-patterns";

    if (uses_x) {
        need(cfg.x >= 2, "x must be >= 2");
        need(cfg.x <= 1'000'000'000'000'000ull, "x must be <= 1e15");
    }
    if (uses_window && cfg.x >= 2) {
        need(cfg.omega >= 1.0 && cfg.omega <= static_cast<double>(cfg.x),
             "omega must satisfy 1 <= omega <= x");
        if (cfg.omega >= 1.0 && cfg.omega <= static_cast<double>(cfg.x)) {
            std::uint64_t lo =
                static_cast<std::uint64_t>(static_cast<double>(cfg.x) / cfg.omega);
            need(lo < cfg.x, "window (x/omega, x] is empty");
            need(cfg.x - lo <= kMaxWindowSpan,
                 "window span x - x/omega exceeds the scan budget 2^33");
        }
    }
    if (uses_params) {
        need(cfg.a >= 1, "a must be >= 1");
        need(cfg.h != 0, "h must be nonzero");
    }
    if (uses_eps) need(cfg.epsilon > 0.0 && cfg.epsilon < 1.0, "epsilon must lie in (0, 1)");
    if (uses_pair) {
        check_sel("g1", cfg.g1);
        check_sel("g2", cfg.g2);
    }
    if (uses_weighting)
        need(cfg.weighting == "logarithmic" || cfg.weighting == "natural",
             "weighting must be 'logarithmic' or 'natural'");

    if (sc == "sieve-dump") {
        need(cfg.function == "liouville" || cfg.function == "mobius",
             "function must be 'liouville' or 'mobius'");
        need(cfg.lo >= 1, "lo must be >= 1");
        need(cfg.lo < cfg.hi, "lo must be < hi");
        if (cfg.lo < cfg.hi)
            need(cfg.hi - cfg.lo <= chowla::kSignWindowBudget,
                 "window hi - lo exceeds the sign-window budget " +
                     std::to_string(chowla::kSignWindowBudget));
    } else if (sc == "correlate3") {
        check_sel("g1", cfg.g1);
        check_sel("g2", cfg.g2);
        check_sel("g3", cfg.g3);
    } else if (sc == "sign-patterns") {
        need(cfg.k >= 1 && cfg.k <= 8, "k must lie in [1, 8]");
        check_sel("function", cfg.function, /*must_sign=*/true);
    } else if (sc == "distance") {
        check_sel("g1", cfg.g1);
        check_sel("chi", cfg.chi, false, /*must_char=*/true);
        need(std::isfinite(cfg.t), "t must be finite");
    } else if (sc == "entropy-scan") {
        try {
            chowla::decrement_schedule(cfg.H_minus, cfg.C0, cfg.J, cfg.a, cfg.cap);
        } catch (const std::exception& e) {
            bad.push_back(std::string("schedule: ") + e.what());
        }
    } else if (sc == "concentration") {
        need(cfg.H >= 2 && cfg.H <= (1u << 20), "H must lie in [2, 2^20]");
        need(cfg.base >= 1, "base must be >= 1");
        need(cfg.trials >= 1 && cfg.trials <= 100'000'000ull, "trials must lie in [1, 1e8]");
    } else if (sc == "circle-scan") {
        need(cfg.H >= 2, "H must be >= 2");
        need(cfg.a >= 1 && cfg.H % std::max<std::uint64_t>(cfg.a, 1) == 0,
             "H must be a multiple of a");
        need(cfg.a >= 1 && cfg.a <= chowla::kFourthMomentGridBudget / std::max<std::uint64_t>(cfg.H, 1),
             "grid size a*H exceeds the budget " + std::to_string(chowla::kFourthMomentGridBudget));
    } else if (sc == "fourth-moment") {
        need(cfg.H >= 2, "H must be >= 2");
        need(cfg.a >= 1 && cfg.a <= chowla::kFourthMomentGridBudget / std::max<std::uint64_t>(cfg.H, 1),
             "grid size a*H exceeds the budget " + std::to_string(chowla::kFourthMomentGridBudget));
    } else if (sc == "max-exp-sum") {
        check_sel("function", cfg.function);
        need(cfg.X_start >= 2 && cfg.X_start <= (1ull << 32), "X must lie in [2, 2^32]");
        need(cfg.H >= 1, "H must be >= 1");
        need(cfg.oversample >= 1, "oversample must be >= 1");
        need(cfg.oversample <= chowla::kMaxExpSumGridBudget / std::max<std::uint64_t>(cfg.H, 1),
             "transform length oversample*H exceeds the budget " +
                 std::to_string(chowla::kMaxExpSumGridBudget));
    }

    need(cfg.threads >= 0, "threads must be >= 0");
    need(cfg.format == "csv" || cfg.format == "json", "format must be 'csv' or 'json'");
    need(!cfg.out_path.empty(), "out path must be nonempty ('-' = stdout)");
    return bad;
}

ParseResult parse_config(const std::vector<std::string>& args) {
    ParseResult pr;
    RunConfig& cfg = pr.config;
    double xd = 1e8, omega_in = 0.0, Xd = 1e6, trials_d = 1e4;

    CLI::App app{"Numerical experiments with log-weighted windows of multiplicative functions"};
    app.require_subcommand(1);
    // --h is the two-point shift below, so help must not claim -h.
    app.set_help_flag("--help", "Print help and exit");
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "Read option defaults from an INI file (command-line flags win)");

    auto common = [&](CLI::App* sub) {
        sub->fallthrough();
        sub->configurable();
        sub->set_help_flag("--help", "Print help and exit");
        sub->option_defaults()->always_capture_default(true);
        sub->add_option("--threads", cfg.threads, "Worker threads, 0 = all cores")
            ->envname("CHOWLA_LAB_THREADS");
        sub->add_option("--out", cfg.out_path, "Report path, '-' = stdout");
        sub->add_option("--format", cfg.format, "Report format: csv or json");
        sub->add_flag("--timings", cfg.timings,
                      "Add wall-clock rows (report bytes then vary run to run)");
        sub->add_flag("--dry-run", cfg.dry_run, "Validate and print the resolved plan only");
        return sub;
    };
    auto window_opts = [&](CLI::App* sub) {
        sub->add_option("--x", xd, "Window right edge (floored to an integer)");
        sub->add_option("--omega", omega_in, "Window ratio; 0 = x / ln x");
        return sub;
    };
    auto pair_opts = [&](CLI::App* sub) {
        sub->add_option("--g1", cfg.g1, "First function selector");
        sub->add_option("--g2", cfg.g2, "Second function selector");
        return sub;
    };
    auto offset_opts = [&](CLI::App* sub) {
        sub->add_option("--a", cfg.a, "Dilation in a*n + b");
        sub->add_option("--b", cfg.b, "Offset in a*n + b");
        sub->add_option("--h", cfg.h, "Shift between the two points");
        return sub;
    };
    auto eps_opt = [&](CLI::App* sub) {
        sub->add_option("--epsilon", cfg.epsilon, "Lattice/prime-window scale, in (0, 1)");
        return sub;
    };

    CLI::App* sd = common(app.add_subcommand(
        "sieve-dump", "Sieve a sign window over [lo, hi) and report counts (values too for small spans)"));
    sd->add_option("--function", cfg.function, "liouville or mobius");
    sd->add_option("--lo", cfg.lo, "First n, inclusive");
    sd->add_option("--hi", cfg.hi, "One past the last n");

    CLI::App* co = common(app.add_subcommand(
        "correlate", "Two-point correlation of g1(a n + b) g2(a n + b + h) on the log-weighted window"));
    window_opts(co);
    offset_opts(co);
    pair_opts(co);
    co->add_option("--weighting", cfg.weighting, "logarithmic or natural");

    CLI::App* c3 = common(app.add_subcommand(
        "correlate3", "Three-point correlation of g1(n+s1) g2(n+s2) g3(n+s3)"));
    window_opts(c3);
    c3->add_option("--s1", cfg.s1, "First shift");
    c3->add_option("--s2", cfg.s2, "Second shift");
    c3->add_option("--s3", cfg.s3, "Third shift");
    pair_opts(c3);
    c3->add_option("--g3", cfg.g3, "Third function selector");
    c3->add_option("--weighting", cfg.weighting, "logarithmic or natural");

    CLI::App* sp = common(app.add_subcommand(
        "sign-patterns", "Log-weighted densities of all length-k sign patterns of a sign-valued function"));
    window_opts(sp);
    sp->add_option("--function", cfg.function, "Sign-valued function selector");
    sp->add_option("--k", cfg.k, "Pattern length, 1..8");
    sp->add_option("--weighting", cfg.weighting, "logarithmic or natural");

    CLI::App* di = common(app.add_subcommand(
        "distance", "Pretentious distance from g1 to the character twist chi(n) n^{it} over primes <= x"));
    di->add_option("--x", xd, "Prime cutoff (floored to an integer)");
    di->add_option("--g1", cfg.g1, "Function selector");
    di->add_option("--chi", cfg.chi, "Character selector (principal:<q> or charfile:<path>)");
    di->add_option("--t", cfg.t, "Twist exponent t");

    CLI::App* es = common(app.add_subcommand(
        "entropy-scan", "Walk the decrement schedule and report pattern/residue mutual information per level"));
    window_opts(es);
    eps_opt(es);
    offset_opts(es);
    pair_opts(es);
    es->add_option("--H-minus", cfg.H_minus, "Schedule start H_1 = a * H_minus");
    es->add_option("--C0", cfg.C0, "Schedule growth constant");
    es->add_option("--J", cfg.J, "Maximum number of levels");
    es->add_option("--cap", cfg.cap, "Largest H the schedule may reach");
    es->add_flag("--alt-threshold", cfg.alt_threshold,
                 "Compare I against eps^10 H / ln H instead of H / (ln H lnlnln H)");

    CLI::App* cc = common(app.add_subcommand(
        "concentration", "Monte Carlo concentration of the bilinear prime form F around its decoupled mean"));
    eps_opt(cc);
    cc->add_option("--H", cfg.H, "Row length of the bilinear inputs");
    offset_opts(cc);
    pair_opts(cc);
    cc->add_option("--base", cfg.base, "Inputs are x_{i,j} = g_i(base + j), j = 1..H");
    cc->add_option("--trials", trials_d, "Number of random residue draws");
    cc->add_option("--seed", cfg.seed, "PRNG seed for the draws");

    CLI::App* cs = common(app.add_subcommand(
        "circle-scan", "Large-value frequency set of the prime exponential sum S_H"));
    eps_opt(cs);
    cs->add_option("--H", cfg.H, "Scale H (multiple of a)");
    offset_opts(cs);
    pair_opts(cs);
    cs->add_option("--threshold", cfg.threshold, "Override the eps^2 / ln H cutoff (< 0 = default)");

    CLI::App* fm = common(app.add_subcommand(
        "fourth-moment", "Fourth moment of S_H over the full frequency grid Z/aHZ"));
    eps_opt(fm);
    fm->add_option("--H", cfg.H, "Scale H");
    offset_opts(fm);
    pair_opts(fm);
    fm->add_flag("--with-oracle", cfg.with_oracle,
                 "Also evaluate the prime-quadruple closed form and report the difference");

    CLI::App* ms = common(app.add_subcommand(
        "max-exp-sum", "Mean over length-H windows of [X, 2X) of the maximal short exponential sum of g"));
    ms->add_option("--function", cfg.function, "Function selector");
    ms->add_option("--X", Xd, "Range start (floored to an integer)");
    ms->add_option("--H", cfg.H, "Window length");
    ms->add_option("--oversample", cfg.oversample, "Frequency-grid refinement factor");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("chowla-lab");
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        auto subs = app.get_subcommands();
        pr.message = subs.empty() ? app.help() : subs.front()->help();
        return pr;
    } catch (const CLI::CallForVersion&) {
        pr.message = std::string(kVersion) + "\n";
        return pr;
    } catch (const CLI::ParseError& e) {
        pr.exit_code = 2;
        pr.message = std::string("invalid configuration: ") + e.what() + "\n";
        return pr;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.x = to_u64_floor(xd);
    cfg.X_start = to_u64_floor(Xd);
    cfg.trials = to_u64_floor(trials_d);
    if (omega_in == 0.0)
        cfg.omega = cfg.x >= 2 ? static_cast<double>(cfg.x) / std::log(static_cast<double>(cfg.x))
                               : 1.0;
    else
        cfg.omega = omega_in;

    auto bad = validate(cfg);
    if (!bad.empty()) {
        pr.exit_code = 2;
        std::string msg = "invalid configuration:\n";
        for (const auto& m : bad) msg += "  - " + m + "\n";
        pr.message = msg;
        return pr;
    }
    pr.should_run = true;
    return pr;
}

std::vector<std::string> to_argv(const RunConfig& cfg) {
    std::vector<std::string> v{cfg.subcommand};
    auto add = [&](const char* flag, std::string val) {
        v.emplace_back(flag);
        v.push_back(std::move(val));
    };
    auto d = [](double x) {
        char b[48];
        std::snprintf(b, sizeof b, "%.17g", x);
        return std::string(b);
    };
    auto u = [](std::uint64_t x) { return std::to_string(x); };
    auto i = [](std::int64_t x) { return std::to_string(x); };

    const std::string& sc = cfg.subcommand;
    auto window = [&] {
        add("--x", u(cfg.x));
        add("--omega", d(cfg.omega));
    };
    auto offsets = [&] {
        add("--a", u(cfg.a));
        add("--b", i(cfg.b));
        add("--h", i(cfg.h));
    };
    auto pair = [&] {
        add("--g1", cfg.g1);
        add("--g2", cfg.g2);
    };

    if (sc == "sieve-dump") {
        add("--function", cfg.function);
        add("--lo", u(cfg.lo));
        add("--hi", u(cfg.hi));
    } else if (sc == "correlate") {
        window();
        offsets();
        pair();
        add("--weighting", cfg.weighting);
    } else if (sc == "correlate3") {
        window();
        add("--s1", i(cfg.s1));
        add("--s2", i(cfg.s2));
        add("--s3", i(cfg.s3));
        pair();
        add("--g3", cfg.g3);
        add("--weighting", cfg.weighting);
    } else if (sc == "sign-patterns") {
        window();
        add("--function", cfg.function);
        add("--k", std::to_string(cfg.k));
        add("--weighting", cfg.weighting);
    } else if (sc == "distance") {
        add("--x", u(cfg.x));
        add("--g1", cfg.g1);
        add("--chi", cfg.chi);
        add("--t", d(cfg.t));
    } else if (sc == "entropy-scan") {
        window();
        add("--epsilon", d(cfg.epsilon));
        offsets();
        pair();
        add("--H-minus", u(cfg.H_minus));
        add("--C0", d(cfg.C0));
        add("--J", std::to_string(cfg.J));
        add("--cap", u(cfg.cap));
        if (cfg.alt_threshold) v.emplace_back("--alt-threshold");
    } else if (sc == "concentration") {
        add("--epsilon", d(cfg.epsilon));
        add("--H", u(cfg.H));
        offsets();
        pair();
        add("--base", u(cfg.base));
        add("--trials", u(cfg.trials));
        add("--seed", u(cfg.seed));
    } else if (sc == "circle-scan") {
        add("--epsilon", d(cfg.epsilon));
        add("--H", u(cfg.H));
        offsets();
        pair();
        add("--threshold", d(cfg.threshold));
    } else if (sc == "fourth-moment") {
        add("--epsilon", d(cfg.epsilon));
        add("--H", u(cfg.H));
        offsets();
        pair();
        if (cfg.with_oracle) v.emplace_back("--with-oracle");
    } else if (sc == "max-exp-sum") {
        add("--function", cfg.function);
        add("--X", u(cfg.X_start));
        add("--H", u(cfg.H));
        add("--oversample", u(cfg.oversample));
    }

    add("--threads", std::to_string(cfg.threads));
    add("--out", cfg.out_path);
    add("--format", cfg.format);
    if (cfg.timings) v.emplace_back("--timings");
    if (cfg.dry_run) v.emplace_back("--dry-run");
    return v;
}

}  // namespace chowla_cli
