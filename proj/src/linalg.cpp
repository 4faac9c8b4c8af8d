#include "kashin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kashin/random.hpp"

namespace kashin {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
}

void Matrix::multiply_transposed(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const auto r = row(i);
    for (std::size_t j = 0; j < cols_; ++j) y[j] += xi * r[j];
  }
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix to_matrix(const SignMatrix& signs) {
  Matrix m(signs.rows(), signs.cols());
  for (std::size_t i = 0; i < signs.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < signs.cols(); ++j) r[j] = signs.at(i, j);
  }
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double ratio(std::span<const double> x) {
  double l1 = 0.0;
  for (const double v : x) l1 += std::abs(v);
  if (l1 == 0.0) throw std::invalid_argument("ratio of the zero vector is undefined");
  const double l2 = norm2(x);
  return l1 / (std::sqrt(static_cast<double>(x.size())) * l2);
}

KernelBasis kernel_basis(const Matrix& a, double pivot_tol) {
  const std::size_t n = a.rows();
  const std::size_t cols = a.cols();
  Matrix r = a;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const double v : r.row(i)) scale = std::max(scale, std::abs(v));
  }
  const double threshold = pivot_tol * (scale > 0.0 ? scale : 1.0);

  std::vector<std::size_t> pivot_cols;
  std::vector<bool> is_pivot(cols, false);
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < n; ++c) {
    std::size_t best = lead;
    for (std::size_t i = lead + 1; i < n; ++i) {
      if (std::abs(r(i, c)) > std::abs(r(best, c))) best = i;
    }
    if (std::abs(r(best, c)) <= threshold) continue;
    if (best != lead) std::swap_ranges(r.row(best).begin(), r.row(best).end(), r.row(lead).begin());
    const double inv = 1.0 / r(lead, c);
    auto pivot_row = r.row(lead);
    for (std::size_t j = c; j < cols; ++j) pivot_row[j] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == lead) continue;
      const double f = r(i, c);
      if (f == 0.0) continue;
      auto target = r.row(i);
      for (std::size_t j = c; j < cols; ++j) target[j] -= f * pivot_row[j];
      target[c] = 0.0;
    }
    pivot_cols.push_back(c);
    is_pivot[c] = true;
    ++lead;
  }

  KernelBasis basis;
  basis.ambient = cols;
  basis.rank = pivot_cols.size();
  basis.vectors = Matrix(0, cols);
  std::vector<double> v(cols);
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::fill(v.begin(), v.end(), 0.0);
    v[f] = 1.0;
    for (std::size_t p = 0; p < pivot_cols.size(); ++p) v[pivot_cols[p]] = -r(p, f);
    // two MGS sweeps
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t q = 0; q < basis.vectors.rows(); ++q) {
        const auto b = basis.vectors.row(q);
        const double proj = dot(b, v);
        for (std::size_t j = 0; j < cols; ++j) v[j] -= proj * b[j];
      }
    }
    const double len = norm2(v);
    for (auto& x : v) x /= len;
    basis.vectors.append_row(v);
  }
  return basis;
}

KernelBasis kernel_basis(const SignMatrix& a, double pivot_tol) {
  return kernel_basis(to_matrix(a), pivot_tol);
}

NormEstimate operator_norm(const Matrix& a, double rel_tol, std::uint64_t max_iter) {
  NormEstimate result;
  const std::size_t cols = a.cols();
  if (a.rows() == 0 || cols == 0) {
    result.converged = true;
    return result;
  }
  const std::vector<std::uint8_t> label{'o', 'p', 'n', 'o', 'r', 'm'};
  Rng rng(label);
  std::vector<double> x(cols), ax(a.rows()), y(cols);
  for (auto& v : x) v = rng.normal();
  double len = norm2(x);
  for (auto& v : x) v /= len;

  for (std::uint64_t it = 1; it <= max_iter; ++it) {
    a.multiply(x, ax);
    a.multiply_transposed(ax, y);
    const double mu = dot(ax, ax);  // x^T A^T A x, non-decreasing along the iteration
    result.iterations = it;
    if (mu == 0.0) {
      // a generic start only lands in the kernel when A = 0
      result.value = 0.0;
      result.converged = true;
      return result;
    }
    double res2 = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double d = y[j] - mu * x[j];
      res2 += d * d;
    }
    result.value = std::sqrt(mu);
    result.relative_residual = std::sqrt(res2) / mu;
    if (result.relative_residual <= rel_tol) {
      result.converged = true;
      return result;
    }
    len = norm2(y);
    for (std::size_t j = 0; j < cols; ++j) x[j] = y[j] / len;
  }
  return result;
}

NormEstimate operator_norm(const SignMatrix& a, double rel_tol, std::uint64_t max_iter) {
  return operator_norm(to_matrix(a), rel_tol, max_iter);
}

double kernel_residual(const Matrix& a, const KernelBasis& basis) {
  double worst = 0.0;
  std::vector<double> ab(a.rows());
  for (std::size_t q = 0; q < basis.dim(); ++q) {
    a.multiply(basis.vectors.row(q), ab);
    for (const double v : ab) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

double orthonormality_residual(const KernelBasis& basis) {
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    for (std::size_t j = i; j < basis.dim(); ++j) {
      const double g = dot(basis.vectors.row(i), basis.vectors.row(j));
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace kashin
