#include <chrono>
#include <cmath>
#include <stdexcept>

#include "chowla/circle.hpp"
#include "chowla/entropy.hpp"
#include "chowla/graphmodel.hpp"
#include "chowla/logmeasure.hpp"
#include "chowla/multfunc.hpp"
#include "chowla/sieve.hpp"
#include "chowla_cli/cli.hpp"

namespace chowla_cli {

namespace {

using chowla::CorrelationParams;
using chowla::LogWindow;
using chowla::MultSpec;
using chowla::PrimeWindow;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void push(RunReport& rep, std::string section, std::string key, ReportValue value) {
    rep.rows.push_back({std::move(section), std::move(key), std::move(value)});
}

void cfg_row(RunReport& rep, std::string key, ReportValue value) {
    push(rep, "config", std::move(key), std::move(value));
}

void met(RunReport& rep, std::string key, ReportValue value) {
    push(rep, "metrics", std::move(key), std::move(value));
}

CorrelationParams params_of(const RunConfig& cfg) { return {cfg.a, cfg.b, cfg.h}; }

chowla::Weighting weighting_of(const RunConfig& cfg) {
    return cfg.weighting == "natural" ? chowla::Weighting::natural
                                      : chowla::Weighting::logarithmic;
}

void echo_window(const RunConfig& cfg, RunReport& rep) {
    cfg_row(rep, "x", cfg.x);
    cfg_row(rep, "omega", cfg.omega);
}

void echo_offsets(const RunConfig& cfg, RunReport& rep) {
    cfg_row(rep, "a", cfg.a);
    cfg_row(rep, "b", cfg.b);
    cfg_row(rep, "h", cfg.h);
}

void echo_pair(const RunConfig& cfg, RunReport& rep) {
    cfg_row(rep, "g1", cfg.g1);
    cfg_row(rep, "g2", cfg.g2);
}

// The config echo, grouped so run() and dry_run_plan() agree on what a
// subcommand depends on. The thread count is deliberately absent: it cannot
// change any computed value, and reports must be byte-identical across it.
void echo_config(const RunConfig& cfg, RunReport& rep) {
    const std::string& sc = cfg.subcommand;
    if (sc == "sieve-dump") {
        cfg_row(rep, "function", cfg.function);
        cfg_row(rep, "lo", cfg.lo);
        cfg_row(rep, "hi", cfg.hi);
    } else if (sc == "correlate") {
        echo_window(cfg, rep);
        echo_offsets(cfg, rep);
        echo_pair(cfg, rep);
        cfg_row(rep, "weighting", cfg.weighting);
    } else if (sc == "correlate3") {
        echo_window(cfg, rep);
        cfg_row(rep, "s1", cfg.s1);
        cfg_row(rep, "s2", cfg.s2);
        cfg_row(rep, "s3", cfg.s3);
        echo_pair(cfg, rep);
        cfg_row(rep, "g3", cfg.g3);
        cfg_row(rep, "weighting", cfg.weighting);
    } else if (sc == "sign-patterns") {
        echo_window(cfg, rep);
        cfg_row(rep, "function", cfg.function);
        cfg_row(rep, "k", static_cast<std::int64_t>(cfg.k));
        cfg_row(rep, "weighting", cfg.weighting);
    } else if (sc == "distance") {
        cfg_row(rep, "x", cfg.x);
        cfg_row(rep, "g1", cfg.g1);
        cfg_row(rep, "chi", cfg.chi);
        cfg_row(rep, "t", cfg.t);
    } else if (sc == "entropy-scan") {
        echo_window(cfg, rep);
        cfg_row(rep, "epsilon", cfg.epsilon);
        echo_offsets(cfg, rep);
        echo_pair(cfg, rep);
        cfg_row(rep, "H_minus", cfg.H_minus);
        cfg_row(rep, "C0", cfg.C0);
        cfg_row(rep, "J", static_cast<std::int64_t>(cfg.J));
        cfg_row(rep, "cap", cfg.cap);
        cfg_row(rep, "alt_threshold", static_cast<std::uint64_t>(cfg.alt_threshold ? 1 : 0));
    } else if (sc == "concentration") {
        cfg_row(rep, "epsilon", cfg.epsilon);
        cfg_row(rep, "H", cfg.H);
        echo_offsets(cfg, rep);
        echo_pair(cfg, rep);
        cfg_row(rep, "base", cfg.base);
        cfg_row(rep, "trials", cfg.trials);
        cfg_row(rep, "seed", cfg.seed);
    } else if (sc == "circle-scan") {
        cfg_row(rep, "epsilon", cfg.epsilon);
        cfg_row(rep, "H", cfg.H);
        echo_offsets(cfg, rep);
        echo_pair(cfg, rep);
        cfg_row(rep, "threshold", cfg.threshold);
    } else if (sc == "fourth-moment") {
        cfg_row(rep, "epsilon", cfg.epsilon);
        cfg_row(rep, "H", cfg.H);
        echo_offsets(cfg, rep);
        echo_pair(cfg, rep);
        cfg_row(rep, "with_oracle", static_cast<std::uint64_t>(cfg.with_oracle ? 1 : 0));
    } else if (sc == "max-exp-sum") {
        cfg_row(rep, "function", cfg.function);
        cfg_row(rep, "X", cfg.X_start);
        cfg_row(rep, "H", cfg.H);
        cfg_row(rep, "oversample", cfg.oversample);
    }
}

std::string plan_line(const RunConfig& cfg) {
    const std::string& sc = cfg.subcommand;
    if (sc == "sieve-dump")
        return cfg.function + "_window over [" + std::to_string(cfg.lo) + ", " +
               std::to_string(cfg.hi) + ")";
    if (sc == "correlate") return "correlation2 on the log window, then normalize by Z";
    if (sc == "correlate3") return "correlation3 on the log window, then normalize by Z";
    if (sc == "sign-patterns")
        return "sign_pattern_density over all " + std::to_string([&] {
                   std::uint64_t n = 1;
                   for (int i = 0; i < cfg.k; ++i) n *= 3;
                   return n;
               }()) +
               " patterns";
    if (sc == "distance") return "pretentious_distance over primes <= x";
    if (sc == "entropy-scan") return "decrement_schedule, then scan_for_low_mi level by level";
    if (sc == "concentration")
        return "hoeffding_experiment with " + std::to_string(cfg.trials) + " residue draws";
    if (sc == "circle-scan") return "large_value_set over all (xi, eta) pairs";
    if (sc == "fourth-moment")
        return std::string("fourth_moment on the full grid") +
               (cfg.with_oracle ? ", plus the quadruple-sum oracle" : "");
    if (sc == "max-exp-sum") return "maximal_short_exp_sum averaged over the window starts";
    return "unknown subcommand";
}

void run_sieve_dump(const RunConfig& cfg, RunReport& rep) {
    const bool liou = cfg.function == "liouville";
    chowla::SignWindow w = liou ? chowla::liouville_window(cfg.lo, cfg.hi, cfg.threads)
                                : chowla::mobius_window(cfg.lo, cfg.hi, cfg.threads);
    const std::string op = liou ? "liouville_window" : "mobius_window";
    std::uint64_t minus = 0, zero = 0, plus = 0;
    std::int64_t sum = 0;
    for (std::uint64_t n = cfg.lo; n < cfg.hi; ++n) {
        int v = w.get(n);
        sum += v;
        (v < 0 ? minus : v == 0 ? zero : plus)++;
    }
    met(rep, op + ".count_minus", minus);
    met(rep, op + ".count_zero", zero);
    met(rep, op + ".count_plus", plus);
    met(rep, op + ".partial_sum", sum);
    if (cfg.hi - cfg.lo <= 65'536)
        for (std::uint64_t n = cfg.lo; n < cfg.hi; ++n)
            met(rep, op + ".value." + std::to_string(n), static_cast<std::int64_t>(w.get(n)));
}

void run_correlate(const RunConfig& cfg, RunReport& rep) {
    LogWindow w = chowla::make_log_window(cfg.x, cfg.omega, cfg.threads);
    auto res = chowla::correlation2(parse_selector(cfg.g1), parse_selector(cfg.g2),
                                    params_of(cfg), w, cfg.threads, weighting_of(cfg));
    met(rep, "log_window.lo", w.lo);
    met(rep, "log_window.Z", w.Z);
    met(rep, "correlation2.raw_re", res.raw.real());
    met(rep, "correlation2.raw_im", res.raw.imag());
    met(rep, "correlation2.normalized_re", res.normalized.real());
    met(rep, "correlation2.normalized_im", res.normalized.imag());
    met(rep, "correlation2.abs_normalized", std::abs(res.normalized));
    met(rep, "correlation2.skipped", res.skipped);
}

void run_correlate3(const RunConfig& cfg, RunReport& rep) {
    LogWindow w = chowla::make_log_window(cfg.x, cfg.omega, cfg.threads);
    auto res = chowla::correlation3(parse_selector(cfg.g1), parse_selector(cfg.g2),
                                    parse_selector(cfg.g3), {cfg.s1, cfg.s2, cfg.s3}, w,
                                    cfg.threads, weighting_of(cfg));
    met(rep, "log_window.lo", w.lo);
    met(rep, "log_window.Z", w.Z);
    met(rep, "correlation3.raw_re", res.raw.real());
    met(rep, "correlation3.raw_im", res.raw.imag());
    met(rep, "correlation3.normalized_re", res.normalized.real());
    met(rep, "correlation3.normalized_im", res.normalized.imag());
    met(rep, "correlation3.abs_normalized", std::abs(res.normalized));
    met(rep, "correlation3.skipped", res.skipped);
}

void run_sign_patterns(const RunConfig& cfg, RunReport& rep) {
    LogWindow w = chowla::make_log_window(cfg.x, cfg.omega, cfg.threads);
    auto tally = chowla::sign_pattern_density(parse_selector(cfg.function), cfg.k, w,
                                              cfg.threads, weighting_of(cfg));
    for (std::size_t idx = 0; idx < tally.density.size(); ++idx) {
        std::string name;
        for (int digit : chowla::SignPatternTally::pattern_of(idx, cfg.k))
            name += digit < 0 ? '-' : digit == 0 ? '0' : '+';
        met(rep, "sign_pattern_density.density_" + name, tally.density[idx]);
    }
}

void run_distance(const RunConfig& cfg, RunReport& rep) {
    chowla::PretentiousQuery q{parse_selector(cfg.g1), parse_selector(cfg.chi), cfg.t, cfg.x};
    met(rep, "pretentious_distance.value", chowla::pretentious_distance(q, cfg.threads));
}

void run_entropy_scan(const RunConfig& cfg, RunReport& rep) {
    auto sched = chowla::decrement_schedule(cfg.H_minus, cfg.C0, cfg.J, cfg.a, cfg.cap);
    LogWindow w = chowla::make_log_window(cfg.x, cfg.omega, cfg.threads);
    auto scan = chowla::scan_for_low_mi(sched, parse_selector(cfg.g1), parse_selector(cfg.g2),
                                        cfg.epsilon, params_of(cfg), w, cfg.threads,
                                        cfg.alt_threshold);
    met(rep, "decrement_schedule.levels", static_cast<std::uint64_t>(sched.levels.size()));
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const auto& row = scan.rows[i];
        const std::string base = "scan_for_low_mi.level" + std::to_string(i);
        met(rep, base + ".H", row.H);
        met(rep, base + ".ok", static_cast<std::uint64_t>(row.ok ? 1 : 0));
        if (row.ok) {
            met(rep, base + ".I", row.I);
            met(rep, base + ".HX", row.HX);
            met(rep, base + ".HY", row.HY);
            met(rep, base + ".threshold", row.threshold);
            met(rep, base + ".meets_threshold",
                static_cast<std::uint64_t>(row.meets_threshold ? 1 : 0));
        } else {
            met(rep, base + ".error", row.error);
        }
    }
    met(rep, "scan_for_low_mi.first_passing", static_cast<std::int64_t>(scan.first_passing));
}

void run_concentration(const RunConfig& cfg, RunReport& rep) {
    MultSpec g1 = parse_selector(cfg.g1), g2 = parse_selector(cfg.g2);
    PrimeWindow pw = PrimeWindow::build(g1, g2, cfg.epsilon, cfg.H, params_of(cfg));
    chowla::XPair xp;
    xp.x1 = g1.evaluate_window(cfg.base + 1, cfg.base + cfg.H + 1, cfg.threads).values;
    xp.x2 = g2.evaluate_window(cfg.base + 1, cfg.base + cfg.H + 1, cfg.threads).values;
    auto res = chowla::hoeffding_experiment(xp, pw, cfg.trials, cfg.seed, cfg.threads);
    met(rep, "prime_window.count", static_cast<std::uint64_t>(pw.primes.size()));
    met(rep, "prime_window.sum_inv_p", pw.sum_inv_p());
    met(rep, "hoeffding_experiment.mean_re", res.mean.real());
    met(rep, "hoeffding_experiment.mean_im", res.mean.imag());
    met(rep, "hoeffding_experiment.stddev", res.stddev);
    met(rep, "hoeffding_experiment.decoupled_re", res.decoupled.real());
    met(rep, "hoeffding_experiment.decoupled_im", res.decoupled.imag());
    met(rep, "hoeffding_experiment.mean_drift", std::abs(res.mean - res.decoupled));
    met(rep, "hoeffding_experiment.threshold", res.threshold);
    met(rep, "hoeffding_experiment.tail_freq", res.tail_freq);
    met(rep, "hoeffding_experiment.bound", res.bound);
}

void run_circle_scan(const RunConfig& cfg, RunReport& rep) {
    PrimeWindow pw = PrimeWindow::build(parse_selector(cfg.g1), parse_selector(cfg.g2),
                                        cfg.epsilon, cfg.H, params_of(cfg));
    auto lv = chowla::large_value_set(pw, cfg.H, cfg.threshold);
    met(rep, "prime_window.count", static_cast<std::uint64_t>(pw.primes.size()));
    met(rep, "prime_window.sum_inv_p", pw.sum_inv_p());
    met(rep, "large_value_set.threshold", lv.threshold);
    met(rep, "large_value_set.size", static_cast<std::uint64_t>(lv.members.size()));
    const std::size_t emit = std::min<std::size_t>(lv.members.size(), 128);
    met(rep, "large_value_set.members_emitted", static_cast<std::uint64_t>(emit));
    for (std::size_t i = 0; i < emit; ++i)
        met(rep, "large_value_set.member" + std::to_string(i), lv.members[i]);
}

void run_fourth_moment(const RunConfig& cfg, RunReport& rep) {
    PrimeWindow pw = PrimeWindow::build(parse_selector(cfg.g1), parse_selector(cfg.g2),
                                        cfg.epsilon, cfg.H, params_of(cfg));
    double fm = chowla::fourth_moment(pw, cfg.a, cfg.H);
    double ln_h = std::log(static_cast<double>(cfg.H));
    met(rep, "prime_window.count", static_cast<std::uint64_t>(pw.primes.size()));
    met(rep, "fourth_moment.value", fm);
    met(rep, "fourth_moment.scaled_ln4", fm * ln_h * ln_h * ln_h * ln_h);
    if (cfg.with_oracle) {
        double oracle = chowla::fourth_moment_quadruple(pw, cfg.a, cfg.H);
        met(rep, "fourth_moment_quadruple.value", oracle);
        met(rep, "fourth_moment_quadruple.abs_diff", std::abs(fm - oracle));
    }
}

void run_max_exp_sum(const RunConfig& cfg, RunReport& rep) {
    double v = chowla::maximal_short_exp_sum(parse_selector(cfg.function), cfg.X_start, cfg.H,
                                             cfg.oversample, cfg.threads);
    met(rep, "maximal_short_exp_sum.mean_sup", v);
}

}  // namespace

RunReport run(const RunConfig& cfg) {
    RunReport rep;
    rep.subcommand = cfg.subcommand;
    push(rep, "meta", "version", std::string(kVersion));
    push(rep, "meta", "subcommand", cfg.subcommand);
    echo_config(cfg, rep);

    Timer total;
    if (cfg.subcommand == "sieve-dump")
        run_sieve_dump(cfg, rep);
    else if (cfg.subcommand == "correlate")
        run_correlate(cfg, rep);
    else if (cfg.subcommand == "correlate3")
        run_correlate3(cfg, rep);
    else if (cfg.subcommand == "sign-patterns")
        run_sign_patterns(cfg, rep);
    else if (cfg.subcommand == "distance")
        run_distance(cfg, rep);
    else if (cfg.subcommand == "entropy-scan")
        run_entropy_scan(cfg, rep);
    else if (cfg.subcommand == "concentration")
        run_concentration(cfg, rep);
    else if (cfg.subcommand == "circle-scan")
        run_circle_scan(cfg, rep);
    else if (cfg.subcommand == "fourth-moment")
        run_fourth_moment(cfg, rep);
    else if (cfg.subcommand == "max-exp-sum")
        run_max_exp_sum(cfg, rep);
    else
        throw std::invalid_argument("run: unknown subcommand '" + cfg.subcommand + "'");

    if (cfg.timings) push(rep, "timings", "total_seconds", total.seconds());
    return rep;
}

std::string dry_run_plan(const RunConfig& cfg) {
    RunReport echo;
    echo_config(cfg, echo);
    std::string out = "dry-run: " + cfg.subcommand + "\n";
    for (const auto& row : echo.rows) out += "  " + row.key + " = " + render(row.value) + "\n";
    out += "plan: " + plan_line(cfg) + "\n";
    return out;
}

}  // namespace chowla_cli
