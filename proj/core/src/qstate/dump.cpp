#include "qrl/qstate/dump.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace qrl::qstate {

namespace {

double clean(double x) { return std::abs(x) <= kTolerance ? 0.0 : x; }

template <typename ValuesFn>
std::string render_terms(const StateVector &state, ValuesFn &&values) {
    std::string out;
    for (std::size_t i = 0; i < state.amplitudes().size(); ++i) {
        const Complex amp = state[i];
        if (std::abs(amp) <= kTolerance) {
            continue;
        }
        if (!out.empty()) {
            out += " + ";
        }
        out += format_amplitude(amp);
        const std::string ket = values(i);
        if (!ket.empty()) {
            out += ' ';
            out += ket;
        }
    }
    return out;
}

std::uint64_t compressed_index(const QuantumHeap &heap, std::size_t basis) {
    std::uint64_t v = 0;
    std::size_t j = 0;
    for (std::size_t q : heap.allocated()) {
        v |= static_cast<std::uint64_t>((basis >> q) & 1U) << j++;
    }
    return v;
}

} // namespace

std::string format_amplitude(Complex amp) {
    const double re = clean(amp.real());
    const double im = clean(amp.imag());
    if (im == 0.0) {
        return fmt::format("{:.6g}", re);
    }
    if (re == 0.0) {
        return fmt::format("{:.6g}i", im);
    }
    return fmt::format("({:.6g}{:+.6g}i)", re, im);
}

std::string dump_line(const Machine &m) {
    const auto &regs = m.registers();
    const std::string terms = render_terms(m.state(), [&](std::size_t basis) {
        if (regs.empty()) {
            return std::string{};
        }
        std::string ket = "|";
        for (std::size_t r = 0; r < regs.size(); ++r) {
            if (r > 0) {
                ket += ',';
            }
            ket += std::to_string(regs[r].ref.value_in(basis));
        }
        return ket + ">";
    });
    return fmt::format("[{}/{}] {}", m.heap().allocated_count(), m.heap().capacity(), terms);
}

std::string dump_state(const Machine &m) {
    const auto &heap = m.heap();
    const std::string terms = render_terms(m.state(), [&](std::size_t basis) {
        if (heap.allocated_count() == 0) {
            return std::string{};
        }
        return fmt::format("|{}>", compressed_index(heap, basis));
    });
    return fmt::format(": STATE: {} / {} qubits allocated, {} / {} qubits free\n{}",
                       heap.allocated_count(), heap.capacity(), heap.free_count(),
                       heap.capacity(), terms);
}

std::string dump_json(const Machine &m) {
    nlohmann::json j;
    j["allocated"] = m.heap().allocated_count();
    j["capacity"] = m.heap().capacity();
    j["free"] = m.heap().free_count();
    auto regs = nlohmann::json::array();
    for (const auto &r : m.registers()) {
        regs.push_back({{"name", r.name}, {"qubits", r.ref.qubits}});
    }
    j["registers"] = regs;
    auto terms = nlohmann::json::array();
    const auto &state = m.state();
    for (std::size_t i = 0; i < state.amplitudes().size(); ++i) {
        if (std::abs(state[i]) <= kTolerance) {
            continue;
        }
        std::vector<std::uint64_t> values;
        for (const auto &r : m.registers()) {
            values.push_back(r.ref.value_in(i));
        }
        terms.push_back({{"values", values},
                         {"re", clean(state[i].real())},
                         {"im", clean(state[i].imag())}});
    }
    j["terms"] = terms;
    return j.dump();
}

RegisterSnapshot snapshot(const Machine &m, const RegisterRef &reg, std::string name) {
    RegisterSnapshot snap;
    snap.name = std::move(name);
    snap.qubits = reg.qubits;
    snap.density = m.state().reduced_density(reg.qubits);
    const Matrix &rho = snap.density;
    const double purity = std::abs((rho * rho).trace());
    snap.pure = std::abs(purity - 1.0) <= 1e-9;
    if (snap.pure) {
        std::size_t pivot = 0;
        for (std::size_t i = 1; i < rho.dim(); ++i) {
            if (rho(i, i).real() > rho(pivot, pivot).real()) {
                pivot = i;
            }
        }
        const double scale = 1.0 / std::sqrt(rho(pivot, pivot).real());
        snap.amplitudes.resize(rho.dim());
        for (std::size_t i = 0; i < rho.dim(); ++i) {
            snap.amplitudes[i] = rho(i, pivot) * scale;
        }
        // Global phase: the first nonzero amplitude is made real and positive.
        for (const auto &a : snap.amplitudes) {
            if (std::abs(a) > kTolerance) {
                const Complex phase = std::conj(a) / std::abs(a);
                for (auto &x : snap.amplitudes) {
                    x *= phase;
                }
                break;
            }
        }
    }
    return snap;
}

std::string format_snapshot(const RegisterSnapshot &snap) {
    std::string terms;
    const std::size_t dim = snap.density.dim();
    for (std::size_t i = 0; i < dim; ++i) {
        const Complex c = snap.pure ? snap.amplitudes[i] : snap.density(i, i);
        if (std::abs(c) <= kTolerance) {
            continue;
        }
        if (!terms.empty()) {
            terms += " + ";
        }
        terms += fmt::format("{} |{}>", format_amplitude(c), i);
    }
    return fmt::format(": {} {}: {}", snap.pure ? "REGISTER" : "SPECTRUM", snap.name, terms);
}

} // namespace qrl::qstate
