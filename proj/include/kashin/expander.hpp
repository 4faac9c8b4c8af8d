#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kashin/bit_source.hpp"

namespace kashin {

// Random-walk transition operator of a regular graph, applied matrix-free.
class WalkOperator {
 public:
  virtual ~WalkOperator() = default;
  virtual std::size_t vertex_count() const = 0;
  // out = P * in
  virtual void apply(std::span<const double> in, std::span<double> out) const = 0;
};

struct Vertex {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Margulis / Gabber-Galil graph on Z_m x Z_m, m a power of two, degree 8.
// Neighbour i of (x, y) is, in order:
//   (x+y, y) (x-y, y) (x+y+1, y) (x-y-1, y) (x, y+x) (x, y-x) (x, y+x+1) (x, y-x-1)
// Maps 2k and 2k+1 are mutually inverse bijections, so P is symmetric.
class ExpanderGraph final : public WalkOperator {
 public:
  static constexpr unsigned kDegree = 8;
  static constexpr unsigned kStepBits = 3;

  // Throws std::invalid_argument unless side is a power of two in [2, 2^62].
  explicit ExpanderGraph(std::uint64_t side);

  std::uint64_t side() const { return side_; }
  unsigned side_bits() const { return side_bits_; }
  // Throws std::overflow_error when side^2 does not fit in size_t.
  std::size_t vertex_count() const override;

  Vertex neighbor(Vertex v, unsigned index) const {
    const std::uint64_t x = v.x, y = v.y;
    switch (index) {
      case 0: return {(x + y) & mask_, y};
      case 1: return {(x - y) & mask_, y};
      case 2: return {(x + y + 1) & mask_, y};
      case 3: return {(x - y - 1) & mask_, y};
      case 4: return {x, (y + x) & mask_};
      case 5: return {x, (y - x) & mask_};
      case 6: return {x, (y + x + 1) & mask_};
      default: return {x, (y - x - 1) & mask_};
    }
  }
  std::array<Vertex, kDegree> neighbors(Vertex v) const;

  std::size_t index(Vertex v) const { return static_cast<std::size_t>(v.x * side_ + v.y); }
  Vertex vertex(std::size_t index) const { return {index / side_, index % side_}; }

  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  std::uint64_t side_;
  std::uint64_t mask_;
  unsigned side_bits_;
};

// Test double: complete graph with self-loops, P = J / |V| (lambda = 0).
class CompleteWalk final : public WalkOperator {
 public:
  explicit CompleteWalk(std::size_t vertices) : vertices_(vertices) {}
  std::size_t vertex_count() const override { return vertices_; }
  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  std::size_t vertices_;
};

// Test double: simple random walk on the cycle C_m.
class CycleWalk final : public WalkOperator {
 public:
  explicit CycleWalk(std::size_t vertices) : vertices_(vertices) {}
  std::size_t vertex_count() const override { return vertices_; }
  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  std::size_t vertices_;
};

struct WalkState {
  Vertex current;
  std::uint64_t steps = 0;
  bool record = false;
  std::vector<Vertex> visited;
};

// Draws the start vertex: x then y, side_bits() bits each.
WalkState start_walk(const ExpanderGraph& graph, BitSource& bits, bool record = false);
// One step: 3 bits index the neighbour list.
void step_walk(const ExpanderGraph& graph, WalkState& state, BitSource& bits);

// Walk visiting `length` vertices (the uniform start counts as the first).
// Consumes exactly 2*log2(m) + 3*(length-1) bits.
std::vector<Vertex> walk(const ExpanderGraph& graph, BitSource& bits, std::uint64_t length);

struct LambdaEstimate {
  double value = 0.0;
  // certified distance from `value` to an eigenvalue of P on e-perp
  double error_bound = 0.0;
  std::uint64_t iterations = 0;
  bool converged = false;
};

// Second largest |eigenvalue| of P by power iteration on P^2 restricted to
// the complement of the uniform vector. Non-convergence is reported through
// `converged`, never hidden.
LambdaEstimate estimate_lambda(const WalkOperator& op, double tol = 1e-10,
                               std::uint64_t max_iter = 200000);

inline constexpr std::size_t kDenseSpectrumLimit = 1024;

// Full dense eigensolve of P; |V| <= 1024.
std::vector<double> walk_spectrum(const WalkOperator& op);
// max_{i>=2} |lambda_i| from the dense spectrum.
double dense_lambda(const WalkOperator& op);

inline constexpr std::size_t kHittingLimit = 4096;

using VertexSet = std::vector<bool>;

// Probability that the walk (uniform start = step 1) lies in sets[i] at step
// i+1 for every i: <Pi_k P ... P Pi_1 u, 1> with u uniform.
double hitting_probability_exact(const WalkOperator& op, std::span<const VertexSet> sets);

// prod_{i<k} sqrt(lam + (1-lam) s_i/|V|) * sqrt(lam + (1-lam) s_{i+1}/|V|).
double chl_bound(double lambda, std::span<const std::uint64_t> set_sizes,
                 std::uint64_t vertex_count);

}  // namespace kashin
