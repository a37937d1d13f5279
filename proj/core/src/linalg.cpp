#include "qrl/linalg.hpp"

#include <cmath>

#include "qrl/error.hpp"

namespace qrl {

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

Matrix::Matrix(std::size_t dim, std::initializer_list<Complex> row_major)
    : Matrix(dim, std::vector<Complex>(row_major)) {}

Matrix::Matrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
    if (data_.size() != dim_ * dim_) {
        throw Error(ErrorKind::InvalidArgument,
                    "matrix data does not match its dimension");
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const Complex> entries) {
    Matrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex Matrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

bool Matrix::is_diagonal(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            if (r != c && std::abs((*this)(r, c)) > tol) {
                return false;
            }
        }
    }
    return true;
}

bool Matrix::is_unitary(double tol) const {
    if (dim_ == 0) {
        return false;
    }
    const Matrix product = (*this) * adjoint();
    return frobenius_distance(product, identity(dim_)) <= tol;
}

Matrix &Matrix::operator*=(Complex scalar) {
    for (auto &x : data_) {
        x *= scalar;
    }
    return *this;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.dim_ != b.dim_) {
        throw Error(ErrorKind::ArityMismatch, "matrix dimensions differ");
    }
    const std::size_t n = a.dim_;
    Matrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex x = a(r, k);
            if (x == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += x * b(k, c);
            }
        }
    }
    return out;
}

Matrix operator*(Complex scalar, Matrix m) {
    m *= scalar;
    return m;
}

Matrix operator+(const Matrix &a, const Matrix &b) {
    if (a.dim_ != b.dim_) {
        throw Error(ErrorKind::ArityMismatch, "matrix dimensions differ");
    }
    Matrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
        out.data_[i] += b.data_[i];
    }
    return out;
}

Matrix operator-(const Matrix &a, const Matrix &b) {
    return a + Complex{-1.0} * b;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    const std::size_t n = a.dim() * b.dim();
    Matrix out(n);
    for (std::size_t ar = 0; ar < a.dim(); ++ar) {
        for (std::size_t ac = 0; ac < a.dim(); ++ac) {
            const Complex x = a(ar, ac);
            for (std::size_t br = 0; br < b.dim(); ++br) {
                for (std::size_t bc = 0; bc < b.dim(); ++bc) {
                    out(ar * b.dim() + br, ac * b.dim() + bc) = x * b(br, bc);
                }
            }
        }
    }
    return out;
}

double frobenius_distance(const Matrix &a, const Matrix &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::ArityMismatch, "matrix dimensions differ");
    }
    double sum = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        sum += std::norm(da[i] - db[i]);
    }
    return std::sqrt(sum);
}

double phase_aligned_distance(const Matrix &a, const Matrix &b) {
    // e^{i phi} = tr(b^dagger a) / |tr(b^dagger a)| minimises ||a - e^{i phi} b||.
    const Complex overlap = (b.adjoint() * a).trace();
    const Complex phase =
        std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
    return frobenius_distance(a, phase * b);
}

} // namespace qrl
