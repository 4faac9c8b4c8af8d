#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kashin/linalg.hpp"
#include "kashin/random.hpp"

namespace kashin {

// ---------------------------------------------------------------------------
// Operator-norm tail

enum class TailEntries {
  construction,  // A = A1 . A2 from the O(N)-bit construction
  independent,   // fully independent uniform signs (control)
};

struct TailConfig {
  std::size_t rows = 0;
  std::size_t cols = 0;
  unsigned k = 0;  // independence order of A1; must be even and <= sqrt(N)
  std::vector<double> t_grid;
  std::uint64_t trials = 0;
  SeedBytes seed;
  TailEntries entries = TailEntries::construction;
};

struct TailReport {
  std::size_t rows = 0;
  std::size_t cols = 0;
  unsigned k = 0;
  double xi = 0.0;
  std::uint64_t trials = 0;
  std::vector<double> t_grid;
  std::vector<double> thresholds;  // 1 + sqrt(xi) + t
  std::vector<std::uint64_t> exceed_counts;
  std::vector<double> frequencies;
  std::vector<double> bounds;
  std::vector<bool> flagged;       // frequency > bound + 3 binomial standard errors
  std::vector<double> normalized_norms;  // ||A|| / sqrt(N) per trial
  std::uint64_t three_root_n_count = 0;  // trials with ||A|| > 3 sqrt(N)
  double three_root_n_frequency = 0.0;

  bool any_flagged() const;
};

// Tail bound for a matrix whose entries are k-wise independent signs (k even):
// 2n (1 + t / (1 + sqrt(xi)))^(-k), i.e. the 2k'-wise statement with k' = k/2.
double opnorm_tail_bound(std::size_t rows, double xi, unsigned k, double t);

// Ten evenly spaced t values from 0 to 2 - sqrt(xi) (the 3 sqrt(N) threshold).
std::vector<double> default_t_grid(double xi, std::size_t points = 10);

// Throws std::invalid_argument when k is odd, k > sqrt(N), or n > N.
TailReport check_opnorm_tail(const TailConfig& config);

// ---------------------------------------------------------------------------
// Anti-concentration of 4-wise independent sign vectors

struct PaleyZygmundReport {
  std::size_t cols = 0;
  unsigned degree = 0;
  bool exhaustive = false;
  std::uint64_t samples = 0;  // seeds enumerated or drawn
  std::uint64_t hits = 0;     // seeds with <Psi, x>^2 >= 1/2
  double fraction = 0.0;
  double standard_error = 0.0;  // 0 when exhaustive
  static constexpr double kBound = 1.0 / 12.0;
  bool meets_bound() const { return fraction >= kBound; }
};

struct PaleyZygmundOptions {
  unsigned degree = 0;  // 0 picks ceil(log2(N + 1))
  std::uint64_t monte_carlo_samples = 1u << 20;
  SeedBytes seed;
};

// Fraction of seeds of the 4-wise generator (M = N) with <Psi, x>^2 >= 1/2.
// Enumerates all 2^(4r) seeds when 4r <= 24, otherwise samples them.
PaleyZygmundReport paley_zygmund_check(std::span<const double> x,
                                       const PaleyZygmundOptions& options = {});

// ---------------------------------------------------------------------------
// Single-vector lower tail

struct SingleVectorConfig {
  std::size_t rows = 0;
  unsigned k = 2;            // independence order for A1
  std::uint64_t trials = 0;
  SeedBytes seed;
  bool redraw_a1 = false;    // false: one fixed A1; true: fresh A1 per trial
  double epsilon_cap = 0.5;  // epsilon must not exceed epsilon_cap * sqrt(xi)
};

struct SingleVectorReport {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double epsilon = 0.0;
  double threshold = 0.0;  // 6 epsilon sqrt(N)
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;  // trials with ||A x||_2 < threshold
  double probability = 0.0;
  double standard_error = 0.0;
};

// Empirical P{ ||A x||_2 < 6 epsilon sqrt(N) } over fresh walk factors A2.
// x must be a unit vector. Throws std::invalid_argument outside the epsilon range.
SingleVectorReport single_vector_test(std::span<const double> x, double epsilon,
                                      const SingleVectorConfig& config);

// ---------------------------------------------------------------------------
// Distortion of a subspace

struct DistortionConfig {
  std::uint64_t samples = 1000;
  std::uint64_t restarts = 200;
  std::uint64_t iterations = 500;
  double step = 0.5;                 // s_t = step / sqrt(t)
  bool coordinate_candidates = true; // also try the projections of e_1..e_N
  SeedBytes seed;
};

struct DistortionReport {
  std::size_t ambient = 0;
  std::size_t dim = 0;
  double delta = 1.0;          // smallest ratio found
  std::vector<double> witness; // unit vector attaining delta
  double baseline = 0.0;       // 1/sqrt(N): the ratio of a coordinate vector
  std::uint64_t samples = 0;
  std::uint64_t restarts = 0;
  std::uint64_t iterations = 0;  // total optimizer iterations
  double max_ratio = 0.0;        // largest ratio among evaluated vectors
  std::uint64_t evaluated = 0;
  std::uint64_t upper_bound_violations = 0;  // ratios above 1 + kRatioSlack
  std::vector<double> restart_best;          // best ratio reached by each restart

  static constexpr double kRatioSlack = 1e-12;
};

// Upper-estimates min ratio(x) over unit x in span(basis) by random sampling
// followed by projected subgradient descent on ||x||_1 over the unit sphere
// of the subspace. Throws std::invalid_argument if the basis is empty.
DistortionReport estimate_distortion(const KernelBasis& basis, const DistortionConfig& config);

// span{e_1, ..., e_dim} in R^N: the sparse control subspace.
KernelBasis coordinate_subspace(std::size_t ambient, std::size_t dim);

}  // namespace kashin
