#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qrl/cli/session.hpp"

int main(int argc, char **argv) {
    CLI::App app{"qrl: interpreter for QCL, LanQ and cQPL style quantum programs"};
    app.require_subcommand(0, 1);

    qrl::runtime::RunConfig config;
    std::string prompt = "qcl> ";
    std::string dump_format = "paper";
    app.add_option("--seed", config.seed, "RNG seed for measurements")->capture_default_str();
    app.add_option("--capacity", config.capacity, "qubit capacity of the machine")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--trace", config.trace, "print scheduler events and measurements to stderr");
    app.add_option("--prompt", prompt, "REPL prompt")->capture_default_str();
    app.add_option("--dump-format", dump_format, "dump output format")
        ->check(CLI::IsMember({"paper", "json"}))
        ->capture_default_str();
    app.add_flag("--dump-on-exit", config.dump_on_exit, "print the final state after a run");

    std::string path;
    auto *run = app.add_subcommand("run", "run a source file");
    run->add_option("file", path, "source file")->required();
    auto *check = app.add_subcommand("check", "parse and check a source file");
    check->add_option("file", path, "source file")->required();
    auto *fmt = app.add_subcommand("fmt", "print a source file in canonical form");
    fmt->add_option("file", path, "source file")->required();
    app.add_subcommand("repl", "interactive session (default)");

    CLI11_PARSE(app, argc, argv);
    config.dump_format =
        dump_format == "json" ? qrl::runtime::DumpFormat::Json : qrl::runtime::DumpFormat::Text;

    if (run->parsed()) {
        return qrl::cli::run_file(path, config, std::cout, std::cerr);
    }
    if (check->parsed()) {
        return qrl::cli::check_file(path, std::cout, std::cerr);
    }
    if (fmt->parsed()) {
        return qrl::cli::format_file(path, std::cout, std::cerr);
    }
    return qrl::cli::repl(std::cin, std::cout, config, prompt);
}
