#include "qrl/qstate/state_vector.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl::qstate {

namespace {

std::size_t mask_of(std::span<const std::size_t> qubits) {
    std::size_t mask = 0;
    for (std::size_t q : qubits) {
        mask |= std::size_t{1} << q;
    }
    return mask;
}

std::uint64_t value_of(std::size_t basis, std::span<const std::size_t> qubits) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        v |= static_cast<std::uint64_t>((basis >> qubits[j]) & 1U) << j;
    }
    return v;
}

std::map<std::uint64_t, double> sparse_probabilities(std::span<const Amplitude> amps,
                                                     std::span<const std::size_t> qubits) {
    std::map<std::uint64_t, double> probs;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p > 0.0) {
            probs[value_of(i, qubits)] += p;
        }
    }
    return probs;
}

} // namespace

StateVector::StateVector(std::size_t num_qubits)
    : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
    amps_[0] = 1.0;
}

void StateVector::resize(std::size_t num_qubits) {
    if (num_qubits == num_qubits_) {
        return;
    }
    if (num_qubits > num_qubits_) {
        amps_.resize(std::size_t{1} << num_qubits);
        num_qubits_ = num_qubits;
        return;
    }
    const std::size_t keep = std::size_t{1} << num_qubits;
    for (std::size_t i = keep; i < amps_.size(); ++i) {
        if (std::abs(amps_[i]) > kTolerance) {
            throw Error(ErrorKind::QubitNotClean,
                        "cannot drop qubits that are not in |0>");
        }
    }
    amps_.resize(keep);
    num_qubits_ = num_qubits;
}

void StateVector::apply(const Matrix &u, std::span<const std::size_t> targets,
                        std::span<const std::size_t> controls) {
    const std::size_t k = targets.size();
    if (k == 0 || u.dim() != (std::size_t{1} << k)) {
        throw Error(ErrorKind::ArityMismatch,
                    fmt::format("{}x{} matrix applied to {} target qubits", u.dim(),
                                u.dim(), k));
    }
    const std::size_t tmask = mask_of(targets);
    const std::size_t cmask = mask_of(controls);
    for (std::size_t q : targets) {
        if (q >= num_qubits_) {
            throw Error(ErrorKind::InvalidArgument, fmt::format("qubit {} out of range", q));
        }
    }
    for (std::size_t q : controls) {
        if (q >= num_qubits_) {
            throw Error(ErrorKind::InvalidArgument, fmt::format("qubit {} out of range", q));
        }
    }
    if (std::popcount(tmask) != static_cast<int>(k) || (tmask & cmask) != 0 ||
        std::popcount(cmask) != static_cast<int>(controls.size())) {
        throw Error(ErrorKind::OverlapViolation, "gate operands share a qubit");
    }

    const std::size_t sub = std::size_t{1} << k;
    // offsets[s]: index bits for slot pattern s, slot 0 being the matrix MSB.
    std::vector<std::size_t> offsets(sub, 0);
    for (std::size_t s = 0; s < sub; ++s) {
        for (std::size_t j = 0; j < k; ++j) {
            if ((s >> (k - 1 - j)) & 1U) {
                offsets[s] |= std::size_t{1} << targets[j];
            }
        }
    }
    const bool diagonal = u.is_diagonal(0.0);
    std::vector<Amplitude> in(sub);
    for (std::size_t base = 0; base < amps_.size(); ++base) {
        if ((base & tmask) != 0 || (base & cmask) != cmask) {
            continue;
        }
        if (diagonal) {
            for (std::size_t s = 0; s < sub; ++s) {
                amps_[base | offsets[s]] *= u(s, s);
            }
            continue;
        }
        for (std::size_t s = 0; s < sub; ++s) {
            in[s] = amps_[base | offsets[s]];
        }
        for (std::size_t r = 0; r < sub; ++r) {
            Amplitude acc = 0.0;
            for (std::size_t c = 0; c < sub; ++c) {
                acc += u(r, c) * in[c];
            }
            amps_[base | offsets[r]] = acc;
        }
    }
}

void StateVector::apply_phase(Complex phase, std::span<const std::size_t> controls) {
    const std::size_t cmask = mask_of(controls);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cmask) == cmask) {
            amps_[i] *= phase;
        }
    }
}

std::vector<double> StateVector::outcome_probabilities(std::span<const std::size_t> qubits) const {
    if (qubits.size() > 20) {
        throw Error(ErrorKind::InvalidArgument, "too many qubits for a dense outcome table");
    }
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    for (const auto &[value, p] : sparse_probabilities(amps_, qubits)) {
        probs[value] = p;
    }
    return probs;
}

std::uint64_t StateVector::measure(std::span<const std::size_t> qubits, SeededRng &rng) {
    if (qubits.empty()) {
        throw Error(ErrorKind::EmptyRegister, "cannot measure an empty register");
    }
    const auto probs = sparse_probabilities(amps_, qubits);
    double total = 0.0;
    for (const auto &[value, p] : probs) {
        total += p;
    }
    const double r = rng.uniform() * total;
    double cumulative = 0.0;
    std::uint64_t outcome = probs.rbegin()->first;
    for (const auto &[value, p] : probs) {
        cumulative += p;
        if (r < cumulative) {
            outcome = value;
            break;
        }
    }
    collapse(qubits, outcome);
    return outcome;
}

void StateVector::collapse(std::span<const std::size_t> qubits, std::uint64_t outcome) {
    double kept = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (value_of(i, qubits) == outcome) {
            kept += std::norm(amps_[i]);
        }
    }
    if (kept <= 0.0) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("outcome {} has zero probability", outcome));
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] = value_of(i, qubits) == outcome ? amps_[i] * scale : Amplitude{};
    }
}

double StateVector::probability_one(std::size_t qubit) const {
    if (qubit >= num_qubits_) {
        return 0.0;
    }
    const std::size_t bit = std::size_t{1} << qubit;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & bit) != 0) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

double StateVector::norm_squared() const {
    double sum = 0.0;
    for (const auto &a : amps_) {
        sum += std::norm(a);
    }
    return sum;
}

void StateVector::reset(std::span<const std::size_t> qubits, SeededRng &rng) {
    if (qubits.empty()) {
        return;
    }
    const std::uint64_t outcome = measure(qubits, rng);
    static const Matrix x(2, {0.0, 1.0, 1.0, 0.0});
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        if ((outcome >> j) & 1U) {
            const std::size_t target[] = {qubits[j]};
            apply(x, target);
        }
    }
}

Matrix StateVector::reduced_density(std::span<const std::size_t> qubits) const {
    if (qubits.size() > 10) {
        throw Error(ErrorKind::InvalidArgument, "register too large for a density matrix");
    }
    const std::size_t dim = std::size_t{1} << qubits.size();
    const std::size_t mask = mask_of(qubits);
    std::unordered_map<std::size_t, std::vector<Amplitude>> by_rest;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (amps_[i] == Amplitude{}) {
            continue;
        }
        auto &column = by_rest[i & ~mask];
        column.resize(dim);
        column[value_of(i, qubits)] = amps_[i];
    }
    Matrix rho(dim);
    for (const auto &[rest, v] : by_rest) {
        for (std::size_t a = 0; a < dim; ++a) {
            if (v[a] == Amplitude{}) {
                continue;
            }
            for (std::size_t b = 0; b < dim; ++b) {
                rho(a, b) += v[a] * std::conj(v[b]);
            }
        }
    }
    return rho;
}

} // namespace qrl::qstate
