#include "qrl/cli/session.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "qrl/frontend/parser.hpp"
#include "qrl/frontend/pretty.hpp"

namespace qrl::cli {

namespace {

typecheck::Diagnostic syntax_diagnostic(const frontend::SyntaxError &e) {
    return {typecheck::DiagnosticKind::SyntaxError, typecheck::Severity::Error, e.span(), e.what()};
}

std::optional<std::string> read_source(const std::filesystem::path &path, std::ostream &err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << fmt::format("error: cannot read '{}'\n", path.string());
        return std::nullopt;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Parses, or returns the rendered syntax diagnostic through `err`.
std::optional<frontend::Node> parse_or_report(const std::string &source, std::string_view file,
                                              std::ostream &err) {
    try {
        return frontend::parse_source(source);
    } catch (const frontend::SyntaxError &e) {
        err << typecheck::render(syntax_diagnostic(e), file) << "\n";
        return std::nullopt;
    }
}

bool report_diagnostics(const std::vector<typecheck::Diagnostic> &diags, std::string_view file,
                        std::ostream &err) {
    for (const auto &d : diags) {
        err << typecheck::render(d, file) << "\n";
    }
    return typecheck::has_errors(diags);
}

} // namespace

Session::Session(runtime::RunConfig config) : interp_([&] {
      config.echo = true;
      return config;
  }()) {}

bool Session::complete(std::string_view text) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            i = text.find('\n', i);
            if (i == std::string_view::npos) {
                break;
            }
        } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            const auto close = text.find("*/", i + 2);
            if (close == std::string_view::npos) {
                return false;
            }
            i = close + 1;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            --depth;
        }
    }
    return depth <= 0;
}

std::string Session::feed(std::string_view input) {
    history_.emplace_back(input);
    std::string source(input);
    std::ostringstream diag;
    std::optional<frontend::Node> program;
    try {
        program = frontend::parse_source(source);
    } catch (const frontend::SyntaxError &first) {
        // Shell inputs may omit the final semicolon.
        try {
            program = frontend::parse_source(source + ";");
        } catch (const frontend::SyntaxError &) {
            last_status_ = kDiagnostics;
            return typecheck::render(syntax_diagnostic(first), "input") + "\n";
        }
    }
    typecheck::Checker trial = checker_;
    const auto diags = trial.check(*program);
    if (report_diagnostics(diags, "input", diag)) {
        last_status_ = kDiagnostics;
        return diag.str();
    }
    checker_ = std::move(trial);
    const runtime::RunReport report = interp_.execute(*program);
    std::string out = diag.str() + report.output;
    if (report.exit_status != 0) {
        out += fmt::format("runtime fault: {}\n", report.fault);
    }
    last_status_ = report.exit_status;
    return out;
}

int run_file(const std::filesystem::path &path, const runtime::RunConfig &config, std::ostream &out,
             std::ostream &err) {
    const auto source = read_source(path, err);
    if (!source) {
        return kIoError;
    }
    const std::string file = path.string();
    auto program = parse_or_report(*source, file, err);
    if (!program) {
        return kDiagnostics;
    }
    typecheck::Checker checker;
    if (report_diagnostics(checker.check(*program), file, err)) {
        return kDiagnostics;
    }
    const runtime::RunReport report = runtime::run(*program, config);
    out << report.output;
    if (config.trace) {
        for (const auto &line : report.trace) {
            err << line << "\n";
        }
        for (const auto &line : report.measurements) {
            err << line << "\n";
        }
    }
    if (config.dump_on_exit) {
        out << report.final_dump << "\n";
    }
    if (report.exit_status != 0) {
        err << fmt::format("{}:{}\n", file, report.fault);
    }
    return report.exit_status;
}

int check_file(const std::filesystem::path &path, std::ostream &out, std::ostream &err) {
    (void)out;
    const auto source = read_source(path, err);
    if (!source) {
        return kIoError;
    }
    const std::string file = path.string();
    auto program = parse_or_report(*source, file, err);
    if (!program) {
        return kDiagnostics;
    }
    typecheck::Checker checker;
    return report_diagnostics(checker.check(*program), file, err) ? kDiagnostics : kOk;
}

int format_file(const std::filesystem::path &path, std::ostream &out, std::ostream &err) {
    const auto source = read_source(path, err);
    if (!source) {
        return kIoError;
    }
    auto program = parse_or_report(*source, path.string(), err);
    if (!program) {
        return kDiagnostics;
    }
    out << frontend::pretty(*program);
    return kOk;
}

int repl(std::istream &in, std::ostream &out, const runtime::RunConfig &config, std::string_view prompt) {
    Session session(config);
    std::string pending;
    std::string line;
    out << prompt << std::flush;
    while (std::getline(in, line)) {
        pending += line;
        pending += '\n';
        if (!Session::complete(pending)) {
            continue;
        }
        if (pending.find_first_not_of(" \t\r\n") != std::string::npos) {
            out << session.feed(pending);
        }
        pending.clear();
        out << prompt << std::flush;
    }
    if (pending.find_first_not_of(" \t\r\n") != std::string::npos) {
        out << session.feed(pending);
    }
    out << "\n";
    return kOk;
}

} // namespace qrl::cli
