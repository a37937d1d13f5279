#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qrl {

using Complex = std::complex<double>;

/// Default tolerance for unitarity, normalisation and the dump cutoff.
inline constexpr double kTolerance = 1e-9;

/// Dense square complex matrix stored row-major.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t dim);
    Matrix(std::size_t dim, std::initializer_list<Complex> row_major);
    Matrix(std::size_t dim, std::vector<Complex> row_major);

    static Matrix identity(std::size_t dim);
    static Matrix diagonal(std::span<const Complex> entries);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    Complex &operator()(std::size_t row, std::size_t col) {
        return data_[row * dim_ + col];
    }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }

    [[nodiscard]] Matrix adjoint() const;
    [[nodiscard]] Complex trace() const;
    [[nodiscard]] bool is_diagonal(double tol = kTolerance) const;
    [[nodiscard]] bool is_unitary(double tol = kTolerance) const;

    Matrix &operator*=(Complex scalar);
    friend Matrix operator*(const Matrix &a, const Matrix &b);
    friend Matrix operator*(Complex scalar, Matrix m);
    friend Matrix operator+(const Matrix &a, const Matrix &b);
    friend Matrix operator-(const Matrix &a, const Matrix &b);
    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Kronecker product; `a` is the leftmost (most significant) factor.
Matrix kron(const Matrix &a, const Matrix &b);

/// Frobenius norm of `a - b`.
double frobenius_distance(const Matrix &a, const Matrix &b);

/// Frobenius distance after removing the best global phase between the two.
double phase_aligned_distance(const Matrix &a, const Matrix &b);

} // namespace qrl
