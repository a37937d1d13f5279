#pragma once

// Independent reference computations used to freeze expected values. None of
// these call into the simulator kernels they are compared against.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qrl/linalg.hpp"

namespace qrl::testing {

/// Haar-distributed element of U(2): Gram-Schmidt on a complex Gaussian matrix
/// with the diagonal-phase correction of Mezzadri.
Matrix haar_unitary_2x2(std::mt19937_64 &rng);

/// Haar-random pure qubit state (a, b).
std::vector<Complex> haar_state(std::mt19937_64 &rng);

/// Full 2^n operator of `u` acting on `targets` (targets[0] = matrix MSB)
/// controlled on `controls`, built column by column from basis states;
/// qubit q is bit q of the basis index.
Matrix embed(const Matrix &u, std::span<const std::size_t> targets,
             std::span<const std::size_t> controls, std::size_t n);

/// Plain matrix-vector product.
std::vector<Complex> mat_vec(const Matrix &m, std::span<const Complex> v);

/// N-point DFT with omega = e^{2 pi i / N}: F[y][x] = omega^{xy} / sqrt(N).
Matrix dft_matrix(std::size_t n_points);

/// Probabilities of every value of `qubits` by enumeration of all amplitudes.
std::vector<double> born_probabilities(std::span<const Complex> amps,
                                       std::span<const std::size_t> qubits);

/// Marginal distribution of a register, computed by enumeration.
std::vector<double> marginal(std::span<const Complex> amps, std::span<const std::size_t> qubits);

/// 2|s><s| - I on n qubits, |s> the uniform superposition.
Matrix grover_diffusion(std::size_t n);

/// <psi| rho |psi>.
double fidelity(const Matrix &rho, std::span<const Complex> psi);

} // namespace qrl::testing
