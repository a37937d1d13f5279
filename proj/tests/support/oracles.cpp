#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace qrl::testing {

Matrix haar_unitary_2x2(std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Complex z[2][2];
    for (auto &row : z) {
        for (auto &x : row) {
            x = Complex(gauss(rng), gauss(rng));
        }
    }
    // Columns e0, e1 by Gram-Schmidt.
    Complex e0[2] = {z[0][0], z[1][0]};
    const double n0 = std::sqrt(std::norm(e0[0]) + std::norm(e0[1]));
    e0[0] /= n0;
    e0[1] /= n0;
    Complex e1[2] = {z[0][1], z[1][1]};
    const Complex proj = std::conj(e0[0]) * e1[0] + std::conj(e0[1]) * e1[1];
    e1[0] -= proj * e0[0];
    e1[1] -= proj * e0[1];
    const double n1 = std::sqrt(std::norm(e1[0]) + std::norm(e1[1]));
    e1[0] /= n1;
    e1[1] /= n1;
    // Random phases on the columns make the distribution exactly Haar.
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    const Complex p0 = std::polar(1.0, angle(rng));
    const Complex p1 = std::polar(1.0, angle(rng));
    return Matrix(2, {e0[0] * p0, e1[0] * p1, e0[1] * p0, e1[1] * p1});
}

std::vector<Complex> haar_state(std::mt19937_64 &rng) {
    const Matrix u = haar_unitary_2x2(rng);
    return {u(0, 0), u(1, 0)};
}

Matrix embed(const Matrix &u, std::span<const std::size_t> targets,
             std::span<const std::size_t> controls, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t k = targets.size();
    Matrix out(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        bool active = true;
        for (std::size_t c : controls) {
            active = active && ((col >> c) & 1U);
        }
        if (!active) {
            out(col, col) = 1.0;
            continue;
        }
        std::size_t in_slot = 0;
        for (std::size_t j = 0; j < k; ++j) {
            in_slot = (in_slot << 1) | ((col >> targets[j]) & 1U);
        }
        for (std::size_t out_slot = 0; out_slot < (std::size_t{1} << k); ++out_slot) {
            std::size_t row = col;
            for (std::size_t j = 0; j < k; ++j) {
                const std::size_t bit = (out_slot >> (k - 1 - j)) & 1U;
                row = (row & ~(std::size_t{1} << targets[j])) | (bit << targets[j]);
            }
            out(row, col) += u(out_slot, in_slot);
        }
    }
    return out;
}

std::vector<Complex> mat_vec(const Matrix &m, std::span<const Complex> v) {
    std::vector<Complex> out(m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = 0; c < m.dim(); ++c) {
            out[r] += m(r, c) * v[c];
        }
    }
    return out;
}

Matrix dft_matrix(std::size_t n_points) {
    Matrix f(n_points);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_points));
    for (std::size_t y = 0; y < n_points; ++y) {
        for (std::size_t x = 0; x < n_points; ++x) {
            const double angle = 2 * std::numbers::pi * static_cast<double>((x * y) % n_points) /
                                 static_cast<double>(n_points);
            f(y, x) = std::polar(norm, angle);
        }
    }
    return f;
}

std::vector<double> born_probabilities(std::span<const Complex> amps,
                                       std::span<const std::size_t> qubits) {
    std::vector<double> p(std::size_t{1} << qubits.size(), 0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t v = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            v += ((i >> qubits[j]) & 1U) * (std::size_t{1} << j);
        }
        p[v] += std::norm(amps[i]);
    }
    return p;
}

std::vector<double> marginal(std::span<const Complex> amps, std::span<const std::size_t> qubits) {
    return born_probabilities(amps, qubits);
}

Matrix grover_diffusion(std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix d(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            d(r, c) = 2.0 / static_cast<double>(dim) - (r == c ? 1.0 : 0.0);
        }
    }
    return d;
}

double fidelity(const Matrix &rho, std::span<const Complex> psi) {
    Complex acc = 0.0;
    for (std::size_t a = 0; a < rho.dim(); ++a) {
        for (std::size_t b = 0; b < rho.dim(); ++b) {
            acc += std::conj(psi[a]) * rho(a, b) * psi[b];
        }
    }
    return acc.real();
}

} // namespace qrl::testing
