#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrl/comm/scheduler.hpp"
#include "qrl/error.hpp"
#include "qrl/frontend/ast.hpp"
#include "qrl/qstate/machine.hpp"
#include "qrl/runtime/value.hpp"

namespace qrl::runtime {

enum class DumpFormat { Text, Json };

struct RunConfig {
    std::uint64_t seed = 0;
    std::size_t capacity = 32;
    bool trace = false;
    bool dump_on_exit = false;
    DumpFormat dump_format = DumpFormat::Text;
    /// Append the "[a/c] ..." state line after each top-level statement that
    /// changes the quantum state, as the interactive shell does.
    bool echo = false;
};

struct RunReport {
    std::string output;                    // print, dump and echo text
    std::vector<std::string> measurements; // "measure <register>: <outcome>"
    std::vector<std::string> trace;        // scheduler events when tracing
    std::string final_dump;                // filled when dump_on_exit is set
    int exit_status = 0;                   // 0 ok, 2 runtime fault
    std::optional<ErrorKind> fault_kind;
    std::string fault;
};

/// Recorded elementary operation. An empty target list is a phase applied
/// to the subspace where all controls are |1>; the phase is u(0,0).
struct TraceStep {
    Matrix u;
    std::vector<std::size_t> targets;
    std::vector<std::size_t> controls;
};

/// Tree-walking interpreter for checked programs. Machine state, globals
/// and subroutine definitions persist across execute() calls.
class Interpreter {
  public:
    explicit Interpreter(RunConfig config = {});
    ~Interpreter();
    Interpreter(const Interpreter &) = delete;
    Interpreter &operator=(const Interpreter &) = delete;

    /// Runs the top-level statements, then a parameterless `main` if the
    /// program defines one. Runtime faults are reported, not thrown.
    RunReport execute(const frontend::Node &program);

    [[nodiscard]] qstate::Machine &machine();
    [[nodiscard]] comm::Scheduler &scheduler();
    [[nodiscard]] const RunConfig &config() const;
    /// Current value of a top-level variable, if declared.
    [[nodiscard]] std::optional<Value> global(const std::string &name) const;

    /// Executes the operator call `call` (a Call node) without touching the
    /// machine and returns its elementary steps.
    std::vector<TraceStep> record(const frontend::Node &call);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Fresh interpreter run of a checked program.
RunReport run(const frontend::Node &program, const RunConfig &config = {});

} // namespace qrl::runtime
