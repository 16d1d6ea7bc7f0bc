#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "chowla/multfunc.hpp"

namespace chowla_cli {

inline constexpr const char* kVersion = "0.1.0";

// Everything a subcommand can consume, flattened. Each subcommand reads (and
// echoes) only its own subset; the rest keep their defaults and stay out of
// the report. Values are fully resolved at parse time — omega = 0 becomes
// x / ln x, the thread count absorbs CHOWLA_LAB_THREADS — so two equal
// RunConfigs describe byte-identical runs.
struct RunConfig {
    std::string subcommand;

    std::uint64_t x = 100'000'000;  // window right edge, floor of the --x input
    double omega = 0.0;             // window ratio; resolved, never 0 after parsing
    std::uint64_t a = 1;            // offsets a*n + b and a*n + b + h
    std::int64_t b = 0;
    std::int64_t h = 1;
    double epsilon = 0.5;
    std::uint64_t H = 100;

    std::uint64_t H_minus = 16;     // schedule start (entropy-scan)
    double C0 = 1.0;
    int J = 8;
    std::uint64_t cap = 65'536;
    bool alt_threshold = false;

    std::string g1 = "liouville";
    std::string g2 = "liouville";
    std::string g3 = "liouville";   // correlate3
    std::string function = "liouville";  // sieve-dump, sign-patterns, max-exp-sum
    std::string chi = "principal:1";     // distance
    double t = 0.0;                      // distance
    int k = 2;                           // sign-patterns
    std::int64_t s1 = 0, s2 = 1, s3 = 2; // correlate3 shifts

    std::uint64_t lo = 1, hi = 101;      // sieve-dump
    std::uint64_t base = 1'000'000;      // concentration: x_{i,j} = g_i(base + j)
    std::uint64_t trials = 10'000;       // concentration
    double threshold = -1.0;             // circle-scan override; < 0 = default
    bool with_oracle = false;            // fourth-moment: also run the quadruple sum
    std::uint64_t X_start = 1'000'000;   // max-exp-sum window range [X, 2X)
    std::uint64_t oversample = 4;        // max-exp-sum frequency grid refinement

    std::string weighting = "logarithmic";
    std::uint64_t seed = 0;              // concentration trial draws
    int threads = 0;                     // 0 = all cores
    std::string out_path = "-";
    std::string format = "csv";
    bool timings = false;                // opt-in: timing rows vary run to run
    bool dry_run = false;

    bool operator==(const RunConfig&) const = default;
};

struct ParseResult {
    int exit_code = 0;        // 0 ok / help / version, 2 invalid configuration
    bool should_run = false;  // false when help/version/diagnostics were produced
    RunConfig config;
    std::string message;      // help text or the full list of violated preconditions
};

// Parses args (program name excluded), applies a --config file if given with
// command-line flags winning, resolves derived fields, and validates. Never
// exits or prints; the caller decides what to do with the outcome.
ParseResult parse_config(const std::vector<std::string>& args);

// A flag list that parses back to exactly this config (lossless round trip).
std::vector<std::string> to_argv(const RunConfig& cfg);

// Every violated precondition, one message each; empty means valid.
std::vector<std::string> validate(const RunConfig& cfg);

// Function selector grammar shared by --g1/--g2/--g3/--function/--chi:
//   liouville | mobius | mobius-squared | one | twist:<t> | principal:<q>
//   | charfile:<path> | random:<mean-selector>:<seed>
// charfile points at a text file: first line q, then q lines "re im" giving
// the value at each residue class. Throws invalid_argument on bad input.
chowla::MultSpec parse_selector(const std::string& sel);

using ReportValue = std::variant<std::uint64_t, std::int64_t, double, std::string>;

struct ReportRow {
    std::string section;  // meta | config | metrics | timings
    std::string key;      // metrics keys are <module-operation>.<quantity>
    ReportValue value;
};

struct RunReport {
    std::string subcommand;
    std::vector<ReportRow> rows;
};

// Executes the configured subcommand. Module errors propagate as exceptions;
// the binary maps them to exit 2 (invalid_argument) or 1 (everything else).
RunReport run(const RunConfig& cfg);

// The resolved plan a --dry-run prints: config echo plus one line naming the
// operation that would execute.
std::string dry_run_plan(const RunConfig& cfg);

// Fixed-notation rendering with 12 significant digits, the CSV number format.
std::string format_sig12(double v);

std::string render(const ReportValue& v);

// format is "csv" (header row section,key,value; constant field count) or
// "json" (sections become objects, insertion order preserved).
std::string emit_report(const RunReport& r, const std::string& format);

// Writes bytes to out_path via a temp file + rename so readers never see a
// partial report; "-" streams to stdout.
void write_report(const std::string& bytes, const std::string& out_path);

}  // namespace chowla_cli
