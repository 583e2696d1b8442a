// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace neimkit {

using Vector = std::vector<double>;

/// Dense row-major matrix of 64-bit floats. The only matrix layout used
/// anywhere in this project.
class DenseMatrix {
  public:
    DenseMatrix() = default;

    /// Zero-initialized rows x cols matrix.
    DenseMatrix(std::size_t rows, std::size_t cols);

    /// Construct from row-major data; throws DataError if the entry count
    /// does not match or any entry is non-finite.
    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from_columns(const std::vector<Vector>& columns);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);

    const Vector& data() const { return data_; }
    Vector& data() { return data_; }

    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

DenseMatrix transpose(const DenseMatrix& m);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
Vector matvec(const DenseMatrix& a, std::span<const double> x);

/// y = a^T x without forming the transpose.
Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

Vector scaled(std::span<const double> v, double alpha);
Vector vec_sub(std::span<const double> a, std::span<const double> b);

/// Frobenius norm of a - b.
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& m);

bool all_finite(std::span<const double> v);

}  // namespace neimkit
