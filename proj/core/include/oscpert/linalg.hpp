#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "oscpert/errors.hpp"

namespace oscpert {

using Complex = std::complex<double>;

/// Dense row-major matrix for the small systems used throughout the library.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    Matrix transpose() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;
using ComplexVector = std::vector<Complex>;

template <typename T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
        if (row.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

template <typename T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
}

template <typename T>
Matrix<T> Matrix<T>::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

ComplexMatrix to_complex(const RealMatrix& m);

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v);

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator*(Complex s, const ComplexVector& v);

double norm2(const ComplexVector& v);
double frobenius_norm(const ComplexMatrix& m);
double one_norm(const ComplexMatrix& m);
Complex trace(const ComplexMatrix& m);
/// Determinant by LU with partial pivoting.
Complex determinant(const ComplexMatrix& m);
/// Solves a·x = b column by column; throws SingularTransform on a zero pivot.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_diagonal(const ComplexMatrix& m);

/// All eigenvalues with algebraic multiplicity, unordered.
/// n <= 3 uses closed-form roots of the characteristic polynomial with Newton polishing;
/// larger matrices use Hessenberg reduction and shifted QR.
std::vector<Complex> eigenvalues(const ComplexMatrix& m, double tol = 1e-12);

/// exp(-i·m·t)·v.
ComplexVector matrix_exponential_apply(const ComplexMatrix& m, double t, const ComplexVector& v);

/// exp(-i·m·t) as a dense matrix.
ComplexMatrix evolution_operator(const ComplexMatrix& m, double t);

/// Principal square root through the eigendecomposition.
/// Eigenvalues of the result have Re >= 0; negative reals map to +i·sqrt(|λ|).
ComplexMatrix principal_sqrt(const ComplexMatrix& m, double tol = 1e-10,
                             double condition_cap = 1e12);

}  // namespace oscpert
