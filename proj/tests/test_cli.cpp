#include "chowla_cli/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using chowla_cli::parse_config;
using chowla_cli::ParseResult;
using chowla_cli::ReportValue;
using chowla_cli::RunConfig;
using chowla_cli::RunReport;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name, const std::string& contents) {
    fs::path p = fs::temp_directory_path() / ("chowla_cli_test_" + name);
    std::ofstream f(p, std::ios::trunc);
    f << contents;
    return p;
}

const ReportValue* find_row(const RunReport& r, const std::string& section,
                            const std::string& key) {
    for (const auto& row : r.rows)
        if (row.section == section && row.key == key) return &row.value;
    return nullptr;
}

double dval(const RunReport& r, const std::string& key) {
    const ReportValue* v = find_row(r, "metrics", key);
    REQUIRE(v != nullptr);
    return std::get<double>(*v);
}

std::size_t count_lines_with(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = text.find(needle); at != std::string::npos;
         at = text.find(needle, at + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("parse: a fully spelled correlate line is accepted as-is") {
    auto pr = parse_config({"correlate", "--x", "1e8", "--omega", "1e4", "--g1", "liouville",
                            "--g2", "liouville", "--a", "1", "--b", "0", "--h", "1"});
    CHECK(pr.exit_code == 0);
    CHECK(pr.should_run);
    CHECK(pr.config.subcommand == "correlate");
    CHECK(pr.config.x == 100'000'000);
    CHECK(pr.config.omega == 10'000.0);
    CHECK(pr.config.g1 == "liouville");
    CHECK(pr.config.a == 1);
    CHECK(pr.config.h == 1);
}

TEST_CASE("parse: scientific input is floored to an integer x") {
    auto pr = parse_config({"correlate", "--x", "1234.9", "--omega", "10"});
    CHECK(pr.should_run);
    CHECK(pr.config.x == 1234);
}

TEST_CASE("parse: omega defaults to x over ln x") {
    auto pr = parse_config({"correlate", "--x", "1000"});
    REQUIRE(pr.should_run);
    CHECK(pr.config.omega == doctest::Approx(1000.0 / std::log(1000.0)).epsilon(1e-14));
}

TEST_CASE("parse: out-of-range epsilon is rejected with exit 2") {
    auto pr = parse_config({"circle-scan", "--epsilon", "1.5"});
    CHECK(pr.exit_code == 2);
    CHECK_FALSE(pr.should_run);
    CHECK(pr.message.find("epsilon must lie in (0, 1)") != std::string::npos);
}

TEST_CASE("parse: every violation is listed, not just the first") {
    auto pr = parse_config({"circle-scan", "--epsilon", "1.5", "--H", "7", "--a", "3", "--g1",
                            "bogus"});
    CHECK(pr.exit_code == 2);
    CHECK(count_lines_with(pr.message, "\n  - ") >= 3);
    CHECK(pr.message.find("epsilon") != std::string::npos);
    CHECK(pr.message.find("multiple of a") != std::string::npos);
    CHECK(pr.message.find("bogus") != std::string::npos);
}

TEST_CASE("parse: help, version, unknown flags and missing subcommand") {
    auto help = parse_config({"--help"});
    CHECK(help.exit_code == 0);
    CHECK_FALSE(help.should_run);
    CHECK(help.message.find("sieve-dump") != std::string::npos);

    auto sub_help = parse_config({"correlate", "--help"});
    CHECK(sub_help.exit_code == 0);
    CHECK(sub_help.message.find("--omega") != std::string::npos);

    auto version = parse_config({"--version"});
    CHECK(version.exit_code == 0);
    CHECK(version.message == std::string(chowla_cli::kVersion) + "\n");

    CHECK(parse_config({"correlate", "--nope"}).exit_code == 2);
    CHECK(parse_config({"frobnicate"}).exit_code == 2);
    CHECK(parse_config({}).exit_code == 2);
}

TEST_CASE("parse: config file supplies defaults, command-line flags win") {
    fs::path ini = temp_file("cfg.ini",
                             "[correlate]\n"
                             "x=5000\n"
                             "omega=100\n"
                             "g1=mobius\n");
    auto from_file = parse_config({"--config", ini.string(), "correlate"});
    REQUIRE(from_file.should_run);
    CHECK(from_file.config.x == 5000);
    CHECK(from_file.config.omega == 100.0);
    CHECK(from_file.config.g1 == "mobius");

    auto overridden = parse_config({"--config", ini.string(), "correlate", "--x", "9000"});
    REQUIRE(overridden.should_run);
    CHECK(overridden.config.x == 9000);
    CHECK(overridden.config.omega == 100.0);
    fs::remove(ini);
}

TEST_CASE("parse: thread count comes from the environment unless a flag is given") {
    setenv("CHOWLA_LAB_THREADS", "3", 1);
    auto env_only = parse_config({"correlate", "--x", "1000"});
    CHECK(env_only.config.threads == 3);
    auto flag_wins = parse_config({"correlate", "--x", "1000", "--threads", "2"});
    CHECK(flag_wins.config.threads == 2);
    unsetenv("CHOWLA_LAB_THREADS");
    auto neither = parse_config({"correlate", "--x", "1000"});
    CHECK(neither.config.threads == 0);
}

TEST_CASE("parse: to_argv round-trips every subcommand losslessly") {
    std::vector<std::vector<std::string>> lines{
        {"correlate", "--x", "1e6", "--omega", "1000", "--g1", "mobius", "--g2", "liouville",
         "--b", "-2", "--h", "3", "--weighting", "natural"},
        {"correlate3", "--x", "5000", "--omega", "50", "--s1", "-1", "--s2", "0", "--s3", "4",
         "--g3", "one"},
        {"sign-patterns", "--x", "20000", "--omega", "200", "--function", "mobius", "--k", "3"},
        {"distance", "--x", "100000", "--g1", "liouville", "--chi", "principal:5", "--t",
         "-1.25"},
        {"entropy-scan", "--x", "100000", "--omega", "100", "--epsilon", "0.3", "--H-minus",
         "32", "--C0", "2.5", "--J", "3", "--cap", "4096", "--alt-threshold"},
        {"concentration", "--epsilon", "0.3", "--H", "400", "--base", "777", "--trials", "1e3",
         "--seed", "9"},
        {"circle-scan", "--epsilon", "0.5", "--H", "200", "--threshold", "0.125"},
        {"fourth-moment", "--epsilon", "0.5", "--H", "256", "--with-oracle"},
        {"max-exp-sum", "--function", "twist:0.5", "--X", "5e6", "--H", "512", "--oversample",
         "8"},
        {"sieve-dump", "--function", "mobius", "--lo", "7", "--hi", "7000", "--out",
         "report.csv", "--format", "json", "--dry-run"},
    };
    for (const auto& line : lines) {
        auto first = parse_config(line);
        REQUIRE_MESSAGE(first.should_run, first.message);
        auto again = parse_config(chowla_cli::to_argv(first.config));
        REQUIRE_MESSAGE(again.should_run, again.message);
        CHECK(again.config == first.config);
    }
}

TEST_CASE("selector grammar: named functions, parameterized forms, nesting") {
    using chowla::MultSpec;
    CHECK(chowla_cli::parse_selector("liouville").kind() == MultSpec::Kind::Liouville);
    CHECK(chowla_cli::parse_selector("mobius").kind() == MultSpec::Kind::Mobius);
    CHECK(chowla_cli::parse_selector("mobius-squared").kind() == MultSpec::Kind::MobiusSquared);
    CHECK(chowla_cli::parse_selector("one").kind() == MultSpec::Kind::Constant);
    CHECK(chowla_cli::parse_selector("twist:1.5").kind() == MultSpec::Kind::Twist);
    CHECK(chowla_cli::parse_selector("principal:5").kind() == MultSpec::Kind::Character);

    // Mean 1 forces heads on every draw.
    auto sure = chowla_cli::parse_selector("random:one:7");
    CHECK(sure.kind() == MultSpec::Kind::RandomMult);
    for (std::uint64_t p : {2, 3, 5, 7, 11})
        CHECK(sure.at_prime_power(p, 1) == chowla::cplx{1.0, 0.0});

    // The mean selector may itself carry a colon.
    auto nested = chowla_cli::parse_selector("random:principal:2:9");
    CHECK(nested.kind() == MultSpec::Kind::RandomMult);
    auto v = nested.at_prime_power(3, 1);
    CHECK(std::abs(std::abs(v.real()) - 1.0) <= 1e-15);

    for (const char* bad : {"bogus", "twist:abc", "principal:", "principal:abc", "random:one",
                            "random:one:", "random::3", "charfile:/no/such/file"})
        CHECK_THROWS_AS(chowla_cli::parse_selector(bad), std::invalid_argument);
}

TEST_CASE("selector grammar: character tables from a file") {
    fs::path good = temp_file("chi3.txt", "3\n0 0\n1 0\n-1 0\n");
    auto chi = chowla_cli::parse_selector("charfile:" + good.string());
    CHECK(chi.kind() == chowla::MultSpec::Kind::Character);
    CHECK(chi.at_prime_power(2, 1) == chowla::cplx{-1.0, 0.0});
    CHECK(chi.at_prime_power(3, 1) == chowla::cplx{0.0, 0.0});
    CHECK(chi.at_prime_power(7, 1) == chowla::cplx{1.0, 0.0});
    fs::remove(good);

    // A nonzero value off the units is rejected by the character validator.
    fs::path off_units = temp_file("chi4.txt", "4\n0 0\n1 0\n0.5 0\n-1 0\n");
    CHECK_THROWS_AS(chowla_cli::parse_selector("charfile:" + off_units.string()),
                    std::invalid_argument);
    fs::remove(off_units);

    fs::path truncated = temp_file("chi_short.txt", "3\n0 0\n1 0\n");
    CHECK_THROWS_AS(chowla_cli::parse_selector("charfile:" + truncated.string()),
                    std::invalid_argument);
    fs::remove(truncated);
}

TEST_CASE("fixed-notation rendering carries 12 significant digits") {
    CHECK(chowla_cli::format_sig12(0.0) == "0.000000000000");
    CHECK(chowla_cli::format_sig12(1.0) == "1.00000000000");
    CHECK(chowla_cli::format_sig12(-0.921031746031746) == "-0.921031746032");
    CHECK(chowla_cli::format_sig12(123.456) == "123.456000000");
    CHECK(chowla_cli::format_sig12(0.001) == "0.00100000000000");
    CHECK(chowla_cli::format_sig12(1e15) == "1000000000000000");
    CHECK(chowla_cli::format_sig12(std::nan("")) == "nan");

    CHECK(chowla_cli::render(ReportValue{std::uint64_t{5}}) == "5");
    CHECK(chowla_cli::render(ReportValue{std::int64_t{-3}}) == "-3");
    CHECK(chowla_cli::render(ReportValue{std::string{"liouville"}}) == "liouville");
    CHECK(chowla_cli::render(ReportValue{0.25}) == "0.250000000000");
}

TEST_CASE("emit: CSV header, constant field count, quoting") {
    RunReport empty;
    empty.subcommand = "correlate";
    CHECK(chowla_cli::emit_report(empty, "csv") == "section,key,value\n");

    auto pr = parse_config({"sieve-dump", "--lo", "1", "--hi", "11"});
    REQUIRE(pr.should_run);
    auto rep = chowla_cli::run(pr.config);
    std::string csv = chowla_cli::emit_report(rep, "csv");
    std::size_t start = 0;
    while (start < csv.size()) {
        std::size_t end = csv.find('\n', start);
        REQUIRE(end != std::string::npos);  // text ends with a newline
        std::string line = csv.substr(start, end - start);
        CHECK(std::count(line.begin(), line.end(), ',') == 2);
        start = end + 1;
    }

    RunReport tricky;
    tricky.rows.push_back({"metrics", "weird", std::string("a,b \"c\"")});
    std::string quoted = chowla_cli::emit_report(tricky, "csv");
    CHECK(quoted.find("\"a,b \"\"c\"\"\"") != std::string::npos);

    CHECK_THROWS_AS(chowla_cli::emit_report(empty, "yaml"), std::invalid_argument);
}

TEST_CASE("emit: JSON parses back to the same structure and bytes") {
    auto pr = parse_config({"sieve-dump", "--lo", "1", "--hi", "11"});
    REQUIRE(pr.should_run);
    auto rep = chowla_cli::run(pr.config);
    std::string bytes = chowla_cli::emit_report(rep, "json");
    auto parsed = nlohmann::ordered_json::parse(bytes);
    CHECK(parsed["meta"]["subcommand"] == "sieve-dump");
    CHECK(parsed["meta"]["version"] == chowla_cli::kVersion);
    std::size_t metric_rows = 0;
    for (const auto& row : rep.rows)
        if (row.section == "metrics") ++metric_rows;
    CHECK(parsed["metrics"].size() == metric_rows);
    CHECK(parsed.dump(2) + "\n" == bytes);
}

TEST_CASE("run: sieve dump counts and per-n values on a small span") {
    auto pr = parse_config({"sieve-dump", "--function", "liouville", "--lo", "1", "--hi", "11"});
    REQUIRE(pr.should_run);
    auto rep = chowla_cli::run(pr.config);
    CHECK(std::get<std::uint64_t>(*find_row(rep, "metrics", "liouville_window.count_minus")) == 5);
    CHECK(std::get<std::uint64_t>(*find_row(rep, "metrics", "liouville_window.count_plus")) == 5);
    CHECK(std::get<std::uint64_t>(*find_row(rep, "metrics", "liouville_window.count_zero")) == 0);
    CHECK(std::get<std::int64_t>(*find_row(rep, "metrics", "liouville_window.partial_sum")) == 0);
    CHECK(std::get<std::int64_t>(*find_row(rep, "metrics", "liouville_window.value.10")) == 1);

    auto mu = parse_config({"sieve-dump", "--function", "mobius", "--lo", "1", "--hi", "11"});
    auto mrep = chowla_cli::run(mu.config);
    CHECK(std::get<std::uint64_t>(*find_row(mrep, "metrics", "mobius_window.count_zero")) == 3);
    CHECK(std::get<std::int64_t>(*find_row(mrep, "metrics", "mobius_window.partial_sum")) == -1);
}

TEST_CASE("run: tiny correlate window reproduces the hand-summed value") {
    auto pr = parse_config({"correlate", "--x", "10", "--omega", "5", "--g1", "liouville",
                            "--g2", "liouville"});
    REQUIRE(pr.should_run);
    auto rep = chowla_cli::run(pr.config);
    // Direct sum over n in (2, 10] of lambda(n) lambda(n+1) / n.
    CHECK(dval(rep, "correlation2.raw_re") ==
          doctest::Approx(-0.9210317460317460).epsilon(1e-12));
    CHECK(dval(rep, "correlation2.raw_im") == 0.0);
    CHECK(dval(rep, "log_window.Z") == doctest::Approx(1.4289682539682539).epsilon(1e-12));
    CHECK(std::get<std::uint64_t>(*find_row(rep, "metrics", "correlation2.skipped")) == 0);
}

TEST_CASE("run: sign-pattern densities tile the window exactly") {
    auto pr = parse_config({"sign-patterns", "--x", "10000", "--omega", "100", "--function",
                            "mobius", "--k", "2"});
    REQUIRE(pr.should_run);
    auto rep = chowla_cli::run(pr.config);
    double sum = 0.0;
    std::size_t rows = 0;
    for (const auto& row : rep.rows)
        if (row.section == "metrics" &&
            row.key.rfind("sign_pattern_density.density_", 0) == 0) {
            sum += std::get<double>(row.value);
            ++rows;
        }
    CHECK(rows == 9);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run: deterministic inputs drive every mutual-information row to zero") {
    auto pr = parse_config({"entropy-scan", "--x", "100000", "--omega", "100", "--g1", "one",
                            "--g2", "one", "--epsilon", "0.5", "--H-minus", "16", "--J", "2",
                            "--cap", "64"});
    REQUIRE(pr.should_run);
    auto rep = chowla_cli::run(pr.config);
    std::size_t ok_rows = 0;
    for (const auto& row : rep.rows) {
        if (row.section != "metrics") continue;
        if (row.key.find(".I") != std::string::npos && row.key.rfind("scan_for_low_mi", 0) == 0) {
            CHECK(std::abs(std::get<double>(row.value)) <= 1e-9);
            ++ok_rows;
        }
    }
    CHECK(ok_rows >= 2);
}

TEST_CASE("run: reports are byte-identical across thread counts") {
    std::vector<std::string> base{"correlate", "--x", "2e6",      "--omega", "1000",
                                  "--g1",      "liouville", "--g2", "liouville"};
    auto one = base, four = base;
    one.push_back("--threads");
    one.push_back("1");
    four.push_back("--threads");
    four.push_back("4");
    auto pr1 = parse_config(one), pr4 = parse_config(four);
    REQUIRE(pr1.should_run);
    REQUIRE(pr4.should_run);
    auto r1 = chowla_cli::run(pr1.config);
    auto r4 = chowla_cli::run(pr4.config);
    CHECK(chowla_cli::emit_report(r1, "csv") == chowla_cli::emit_report(r4, "csv"));
    CHECK(chowla_cli::emit_report(r1, "json") == chowla_cli::emit_report(r4, "json"));
}

TEST_CASE("run: unknown subcommand is rejected") {
    RunConfig cfg;
    cfg.subcommand = "frobnicate";
    CHECK_THROWS_AS(chowla_cli::run(cfg), std::invalid_argument);
}

TEST_CASE("write_report: atomic replacement, no temp droppings") {
    fs::path p = fs::temp_directory_path() / "chowla_cli_test_report.csv";
    chowla_cli::write_report("first\n", p.string());
    {
        std::ifstream f(p);
        std::string all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        CHECK(all == "first\n");
    }
    chowla_cli::write_report("second version\n", p.string());
    {
        std::ifstream f(p);
        std::string all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        CHECK(all == "second version\n");
    }
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
    fs::remove(p);
}

TEST_CASE("dry_run_plan names the operation and echoes only relevant knobs") {
    auto pr = parse_config({"correlate", "--x", "1e8", "--omega", "1e4", "--dry-run"});
    REQUIRE(pr.should_run);
    CHECK(pr.config.dry_run);
    std::string plan = chowla_cli::dry_run_plan(pr.config);
    CHECK(plan.find("dry-run: correlate") != std::string::npos);
    CHECK(plan.find("correlation2") != std::string::npos);
    CHECK(plan.find("x = 100000000") != std::string::npos);
    CHECK(plan.find("epsilon") == std::string::npos);  // correlate has no lattice scale
}
