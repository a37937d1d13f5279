#pragma once

// Helpers that drive whole programs through parse, check and run, plus
// random program generators for the property suites.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>

#include "qrl/frontend/ast.hpp"
#include "qrl/linalg.hpp"
#include "qrl/runtime/interpreter.hpp"

namespace qrl::testing {

struct Execution {
    std::unique_ptr<runtime::Interpreter> interpreter;
    runtime::RunReport report;
};

/// Parses and checks `source` (throwing std::runtime_error with the rendered
/// diagnostics on failure), then runs it on a fresh interpreter.
Execution execute(const std::string &source, const runtime::RunConfig &config = {});

/// Parses without checking; for exercising runtime guards directly.
frontend::Node parse_unchecked(const std::string &source);

/// Operator on the first n allocated qubits: column k is the state reached
/// by running `source_for(k)` on a fresh interpreter.
Matrix matrix_by_columns(std::size_t n, const std::function<std::string(std::uint64_t)> &source_for);

/// Random reversible statements over register `reg` of n qubits: rotations,
/// H, CNot, Swap, Phase, CPhase, FT slices and quantum ifs.
std::string random_operator_body(std::mt19937_64 &rng, std::size_t n, const std::string &reg = "q");

/// Random permutation statements (Not, CNot, Swap, *= CNot/Toffoli).
std::string random_qufunct_body(std::mt19937_64 &rng, std::size_t n, const std::string &reg = "q");

/// Random entangling preparation of `reg`.
std::string random_preparation(std::mt19937_64 &rng, std::size_t n, const std::string &reg = "q");

/// Random multi-process program: either forked workers reporting over int
/// channels, or a chain of modules passing registers along.
std::string random_comm_program(std::mt19937_64 &rng);

} // namespace qrl::testing
