#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "chowla_cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto pr = chowla_cli::parse_config(args);
    if (!pr.should_run) {
        std::FILE* sink = pr.exit_code == 0 ? stdout : stderr;
        std::fputs(pr.message.c_str(), sink);
        if (!pr.message.empty() && pr.message.back() != '\n') std::fputc('\n', sink);
        return pr.exit_code;
    }
    if (pr.config.dry_run) {
        std::fputs(chowla_cli::dry_run_plan(pr.config).c_str(), stdout);
        return 0;
    }
    try {
        auto report = chowla_cli::run(pr.config);
        auto bytes = chowla_cli::emit_report(report, pr.config.format);
        chowla_cli::write_report(bytes, pr.config.out_path);
        return 0;
    } catch (const std::invalid_argument& e) {
        // A module precondition the validator did not anticipate is still a
        // configuration problem.
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
