#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qrl/runtime/interpreter.hpp"
#include "qrl/typecheck/checker.hpp"

namespace qrl::cli {

/// Exit codes shared by every entry point.
enum ExitCode : int { kOk = 0, kDiagnostics = 1, kRuntimeFault = 2, kIoError = 3 };

/// Persistent interactive session: declarations, subroutines and the
/// quantum state survive between inputs; rejected inputs change nothing.
class Session {
  public:
    explicit Session(runtime::RunConfig config = {});

    /// True once `text` is a complete input (balanced braces, no open comment).
    static bool complete(std::string_view text);

    /// Parses, checks and runs one input. A missing final `;` is tolerated.
    /// Returns the text to show: program output, echo lines, diagnostics.
    std::string feed(std::string_view input);

    /// Exit status of the last input (0, 1 or 2).
    [[nodiscard]] int last_status() const noexcept { return last_status_; }
    [[nodiscard]] const std::vector<std::string> &history() const noexcept { return history_; }
    [[nodiscard]] runtime::Interpreter &interpreter() noexcept { return interp_; }

  private:
    typecheck::Checker checker_;
    runtime::Interpreter interp_;
    std::vector<std::string> history_;
    int last_status_ = kOk;
};

/// Batch pipeline for a source file. Program output goes to `out`;
/// diagnostics, faults and the trace go to `err`.
int run_file(const std::filesystem::path &path, const runtime::RunConfig &config, std::ostream &out,
             std::ostream &err);

/// Parses and checks only.
int check_file(const std::filesystem::path &path, std::ostream &out, std::ostream &err);

/// Prints the canonical formatting of a source file.
int format_file(const std::filesystem::path &path, std::ostream &out, std::ostream &err);

/// Reads inputs from `in` until end of stream, printing `prompt` before each.
int repl(std::istream &in, std::ostream &out, const runtime::RunConfig &config, std::string_view prompt);

} // namespace qrl::cli
