#pragma once

#include <string>

#include "qrl/linalg.hpp"
#include "qrl/qstate/machine.hpp"

namespace qrl::qstate {

/// Coefficient text: 6 significant digits, real values without sign or `i`
/// when positive, e.g. "0.5", "-0.707107", "0.5i", "(0.5-0.5i)".
std::string format_amplitude(Complex amp);

/// Echo form: "[4/32] 0.5 |0,0> + 0.5 |1,0> ...", one value per live register.
std::string dump_line(const Machine &m);

/// `dump` command form: ": STATE: ..." header plus the state over all
/// allocated qubits as one integer per term.
std::string dump_state(const Machine &m);

/// Machine-readable dump (allocated/capacity/registers/terms).
std::string dump_json(const Machine &m);

/// State of one register. Pure reduced states print as amplitudes with the
/// leading coefficient made real; mixed ones print their outcome spectrum.
struct RegisterSnapshot {
    std::string name;
    std::vector<std::size_t> qubits;
    Matrix density;
    bool pure = false;
    std::vector<Complex> amplitudes; // filled when pure
};

RegisterSnapshot snapshot(const Machine &m, const RegisterRef &reg, std::string name);
std::string format_snapshot(const RegisterSnapshot &snap);

} // namespace qrl::qstate
