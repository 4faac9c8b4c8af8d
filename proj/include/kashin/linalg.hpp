#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kashin/sign_matrix.hpp"

namespace kashin {

// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  // y = M x and y = M^T x
  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transposed(std::span<const double> x, std::span<double> y) const;

  void append_row(std::span<const double> values);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix to_matrix(const SignMatrix& signs);

// Orthonormal basis of Ker A, one basis vector per row of `vectors`.
struct KernelBasis {
  std::size_t ambient = 0;  // N
  std::size_t rank = 0;     // rank of A found by the reduction
  Matrix vectors;           // dim x N
  std::size_t dim() const { return vectors.rows(); }
};

// Row reduction with partial pivoting to reduced echelon form; pivots below
// pivot_tol * max|A_ij| count as zero. The free-variable null vectors are then
// orthonormalised by modified Gram-Schmidt with one reorthogonalisation pass.
KernelBasis kernel_basis(const Matrix& a, double pivot_tol = 1e-9);
KernelBasis kernel_basis(const SignMatrix& a, double pivot_tol = 1e-9);

struct NormEstimate {
  double value = 0.0;
  // ||A^T A x - mu x|| / mu at the returned iterate
  double relative_residual = 0.0;
  std::uint64_t iterations = 0;
  bool converged = false;
};

// Largest singular value by power iteration on A^T A. Stops once the
// Rayleigh-quotient residual is below rel_tol; otherwise returns the best
// iterate with converged = false.
NormEstimate operator_norm(const Matrix& a, double rel_tol = 1e-9,
                           std::uint64_t max_iter = 100000);
NormEstimate operator_norm(const SignMatrix& a, double rel_tol = 1e-9,
                           std::uint64_t max_iter = 100000);

// ||x||_1 / (sqrt(N) ||x||_2). Throws std::invalid_argument for x = 0.
double ratio(std::span<const double> x);

double norm2(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

// max_i |(A b)_i| over every basis vector b.
double kernel_residual(const Matrix& a, const KernelBasis& basis);
// max |<b_i, b_j> - delta_ij|.
double orthonormality_residual(const KernelBasis& basis);

}  // namespace kashin
