#include "kashin/expander.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kashin/random.hpp"

namespace kashin {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void remove_mean(std::span<double> v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (auto& x : v) x -= mean;
}

}  // namespace

ExpanderGraph::ExpanderGraph(std::uint64_t side) : side_(side), mask_(side - 1) {
  if (side < 2 || !std::has_single_bit(side) || side > (std::uint64_t{1} << 62)) {
    throw std::invalid_argument("expander side must be a power of two in [2, 2^62], got " +
                                std::to_string(side));
  }
  side_bits_ = static_cast<unsigned>(std::countr_zero(side));
}

std::size_t ExpanderGraph::vertex_count() const {
  if (side_bits_ * 2 >= std::numeric_limits<std::size_t>::digits) {
    throw std::overflow_error("expander vertex count does not fit in size_t");
  }
  return static_cast<std::size_t>(side_ * side_);
}

std::array<Vertex, ExpanderGraph::kDegree> ExpanderGraph::neighbors(Vertex v) const {
  std::array<Vertex, kDegree> out;
  for (unsigned i = 0; i < kDegree; ++i) out[i] = neighbor(v, i);
  return out;
}

void ExpanderGraph::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    const Vertex here = vertex(v);
    double s = 0.0;
    for (unsigned i = 0; i < kDegree; ++i) s += in[index(neighbor(here, i))];
    out[v] = s / kDegree;
  }
}

void CompleteWalk::apply(std::span<const double> in, std::span<double> out) const {
  const double mean = std::accumulate(in.begin(), in.end(), 0.0) / static_cast<double>(vertices_);
  std::fill(out.begin(), out.end(), mean);
}

void CycleWalk::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = vertices_;
  for (std::size_t v = 0; v < n; ++v) {
    out[v] = 0.5 * (in[(v + n - 1) % n] + in[(v + 1) % n]);
  }
}

WalkState start_walk(const ExpanderGraph& graph, BitSource& bits, bool record) {
  WalkState state;
  state.record = record;
  state.current.x = bits.take(graph.side_bits());
  state.current.y = bits.take(graph.side_bits());
  if (record) state.visited.push_back(state.current);
  return state;
}

void step_walk(const ExpanderGraph& graph, WalkState& state, BitSource& bits) {
  const auto index = static_cast<unsigned>(bits.take(ExpanderGraph::kStepBits));
  state.current = graph.neighbor(state.current, index);
  ++state.steps;
  if (state.record) state.visited.push_back(state.current);
}

std::vector<Vertex> walk(const ExpanderGraph& graph, BitSource& bits, std::uint64_t length) {
  if (length == 0) throw std::invalid_argument("walk length must be at least 1");
  WalkState state = start_walk(graph, bits, true);
  state.visited.reserve(length);
  for (std::uint64_t i = 1; i < length; ++i) step_walk(graph, state, bits);
  return std::move(state.visited);
}

LambdaEstimate estimate_lambda(const WalkOperator& op, double tol, std::uint64_t max_iter) {
  const std::size_t n = op.vertex_count();
  LambdaEstimate result;
  if (n <= 1) {
    result.converged = true;
    return result;
  }
  const std::vector<std::uint8_t> label{'l', 'a', 'm', 'b', 'd', 'a'};
  Rng rng(label);
  std::vector<double> x(n), tmp(n), y(n);
  for (auto& v : x) v = rng.normal();
  remove_mean(x);
  double norm = std::sqrt(dot(x, x));
  for (auto& v : x) v /= norm;

  for (std::uint64_t it = 1; it <= max_iter; ++it) {
    op.apply(x, tmp);
    op.apply(tmp, y);
    remove_mean(y);
    const double mu = dot(x, y);  // Rayleigh quotient of P^2
    const double y_norm = std::sqrt(dot(y, y));
    result.iterations = it;
    if (y_norm == 0.0) {
      // P annihilates e-perp
      result.value = 0.0;
      result.error_bound = 0.0;
      result.converged = true;
      return result;
    }
    double residual2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - mu * x[i];
      residual2 += r * r;
    }
    const double residual = std::sqrt(residual2);
    const double lam = std::sqrt(std::max(mu, 0.0));
    result.value = lam;
    // |sqrt(mu) - sqrt(mu*)| <= |mu - mu*| / sqrt(mu) <= residual / sqrt(mu)
    result.error_bound = lam > 0.0 ? residual / lam : std::sqrt(residual);
    if (result.error_bound <= tol) {
      result.converged = true;
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / y_norm;
  }
  return result;
}

std::vector<double> walk_spectrum(const WalkOperator& op) {
  const std::size_t n = op.vertex_count();
  if (n > kDenseSpectrumLimit) {
    throw std::invalid_argument("dense spectrum limited to " +
                                std::to_string(kDenseSpectrumLimit) + " vertices");
  }
  Eigen::MatrixXd dense(n, n);
  std::vector<double> unit(n, 0.0), column(n);
  for (std::size_t j = 0; j < n; ++j) {
    unit[j] = 1.0;
    op.apply(unit, column);
    unit[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) dense(i, j) = column[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double dense_lambda(const WalkOperator& op) {
  const auto values = walk_spectrum(op);
  double lam = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) lam = std::max(lam, std::abs(values[i]));
  return lam;
}

double hitting_probability_exact(const WalkOperator& op, std::span<const VertexSet> sets) {
  const std::size_t n = op.vertex_count();
  if (n > kHittingLimit) {
    throw std::invalid_argument("exact hitting probability limited to " +
                                std::to_string(kHittingLimit) + " vertices");
  }
  if (sets.empty()) return 1.0;
  for (const auto& s : sets) {
    if (s.size() != n) throw std::invalid_argument("vertex set size does not match graph");
  }
  std::vector<double> mass(n), next(n);
  for (std::size_t v = 0; v < n; ++v) mass[v] = sets[0][v] ? 1.0 / static_cast<double>(n) : 0.0;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    op.apply(mass, next);
    for (std::size_t v = 0; v < n; ++v) mass[v] = sets[i][v] ? next[v] : 0.0;
  }
  return std::accumulate(mass.begin(), mass.end(), 0.0);
}

double chl_bound(double lambda, std::span<const std::uint64_t> set_sizes,
                 std::uint64_t vertex_count) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (vertex_count == 0) throw std::invalid_argument("graph has no vertices");
  for (const auto size : set_sizes) {
    if (size > vertex_count) throw std::invalid_argument("set larger than the vertex set");
  }
  const auto factor = [&](std::uint64_t size) {
    return std::sqrt(lambda + (1.0 - lambda) * static_cast<double>(size) /
                                  static_cast<double>(vertex_count));
  };
  double bound = 1.0;
  for (std::size_t i = 0; i + 1 < set_sizes.size(); ++i) {
    bound *= factor(set_sizes[i]) * factor(set_sizes[i + 1]);
  }
  return bound;
}

}  // namespace kashin
