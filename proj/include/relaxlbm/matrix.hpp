/// @file matrix.hpp
/// @brief Small dense row-major matrices for the relaxation-system algebra.
///
/// Every matrix in this project is at most (2d+1)x(2d+1) = 7x7, so a plain
/// contiguous buffer is all that is needed.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace relaxlbm {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<const double> data() const noexcept { return data_; }

    std::vector<double> diagonal_entries() const;
    Matrix transposed() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend std::vector<double> operator*(const Matrix& a, std::span<const double> v);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Max-norm of all entries.
double max_abs(const Matrix& m);

/// Max-norm of the off-diagonal entries of a square matrix.
double max_abs_off_diagonal(const Matrix& m);

/// Max-norm of (a - b).
double max_abs_difference(const Matrix& a, const Matrix& b);

/// Column sums.
std::vector<double> column_sums(const Matrix& m);

/// Outer product u v^T.
Matrix outer(std::span<const double> u, std::span<const double> v);

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
/// Relative accuracy is about 2^s ulp for s = ceil(log2(2 ||m||_1))
/// squarings, i.e. ~1e-12 for norms near 1e4.
Matrix expm(const Matrix& m);

std::ostream& operator<<(std::ostream& os, const Matrix& m);

}  // namespace relaxlbm
