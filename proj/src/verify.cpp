#include "kashin/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kashin/bit_source.hpp"
#include "kashin/builder.hpp"
#include "kashin/kwise.hpp"

namespace kashin {

namespace {

SignMatrix independent_signs(std::size_t rows, std::size_t cols, Rng& rng) {
  SignMatrix out(rows, cols, Provenance::external);
  for (std::size_t i = 0; i < rows; ++i) {
    auto words = out.row_words(i);
    for (std::size_t w = 0; w < words.size(); ++w) {
      const std::size_t used = std::min<std::size_t>(64, cols - 64 * w);
      const std::uint64_t keep = used == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << used) - 1;
      words[w] = rng.next() & keep;
    }
  }
  return out;
}

void normalize(std::span<double> x) {
  const double len = norm2(x);
  for (auto& v : x) v /= len;
}

}  // namespace

bool TailReport::any_flagged() const {
  return std::any_of(flagged.begin(), flagged.end(), [](bool f) { return f; });
}

double opnorm_tail_bound(std::size_t rows, double xi, unsigned k, double t) {
  const double base = 1.0 + t / (1.0 + std::sqrt(xi));
  return 2.0 * static_cast<double>(rows) * std::pow(base, -static_cast<double>(k));
}

std::vector<double> default_t_grid(double xi, std::size_t points) {
  const double top = 2.0 - std::sqrt(xi);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = points == 1 ? top : top * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

TailReport check_opnorm_tail(const TailConfig& config) {
  const std::size_t n = config.rows;
  const std::size_t cols = config.cols;
  if (n == 0 || n > cols) throw std::invalid_argument("tail check needs 1 <= n <= N");
  if (config.k == 0 || config.k % 2 != 0) throw std::invalid_argument("tail check needs an even k");
  if (static_cast<double>(config.k) > std::sqrt(static_cast<double>(cols))) {
    throw std::invalid_argument("tail check needs k <= sqrt(N)");
  }

  TailReport report;
  report.rows = n;
  report.cols = cols;
  report.k = config.k;
  report.xi = static_cast<double>(n) / static_cast<double>(cols);
  report.trials = config.trials;
  report.t_grid = config.t_grid;
  const double root_xi = std::sqrt(report.xi);
  for (const double t : config.t_grid) {
    report.thresholds.push_back(1.0 + root_xi + t);
    report.bounds.push_back(opnorm_tail_bound(n, report.xi, config.k, t));
  }
  report.exceed_counts.assign(config.t_grid.size(), 0);

  const double root_n = std::sqrt(static_cast<double>(cols));
  for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
    SignMatrix a;
    if (config.entries == TailEntries::construction) {
      BitSource bits = BitSource::deterministic(derive_seed(config.seed, "opnorm-tail", trial));
      a = build_construction(n, cols, config.k, bits).product;
    } else {
      Rng rng(derive_seed(config.seed, "opnorm-control", trial));
      a = independent_signs(n, cols, rng);
    }
    const double norm = operator_norm(a, 1e-8).value / root_n;
    report.normalized_norms.push_back(norm);
    for (std::size_t i = 0; i < report.thresholds.size(); ++i) {
      if (norm >= report.thresholds[i]) ++report.exceed_counts[i];
    }
    if (norm > 3.0) ++report.three_root_n_count;
  }

  const double trials = static_cast<double>(config.trials);
  for (std::size_t i = 0; i < report.thresholds.size(); ++i) {
    const double freq = config.trials ? static_cast<double>(report.exceed_counts[i]) / trials : 0.0;
    report.frequencies.push_back(freq);
    const double p = std::min(report.bounds[i], 1.0);
    const double se = config.trials ? std::sqrt(p * (1.0 - p) / trials) : 0.0;
    report.flagged.push_back(freq > report.bounds[i] + 3.0 * se);
  }
  report.three_root_n_frequency =
      config.trials ? static_cast<double>(report.three_root_n_count) / trials : 0.0;
  return report;
}

PaleyZygmundReport paley_zygmund_check(std::span<const double> x,
                                       const PaleyZygmundOptions& options) {
  const std::size_t cols = x.size();
  if (cols == 0) throw std::invalid_argument("Paley-Zygmund check needs a nonempty vector");
  const unsigned r = options.degree ? options.degree : field_degree_for(cols);
  const KwiseGenerator gen(4, r, cols);

  PaleyZygmundReport report;
  report.cols = cols;
  report.degree = r;
  const auto inner_square = [&](auto&& sign_of) {
    double s = 0.0;
    for (std::size_t i = 0; i < cols; ++i) s += sign_of(i) ? -x[i] : x[i];
    return s * s;
  };

  if (gen.seed_length() <= kMaxEnumeratedSeedBits) {
    std::vector<std::uint64_t> masks(cols);
    for (std::size_t i = 0; i < cols; ++i) masks[i] = gen.functional(i);
    report.exhaustive = true;
    report.samples = std::uint64_t{1} << gen.seed_length();
    for (std::uint64_t seed = 0; seed < report.samples; ++seed) {
      const double sq =
          inner_square([&](std::size_t i) { return (std::popcount(seed & masks[i]) & 1) != 0; });
      if (sq >= 0.5) ++report.hits;
    }
    report.fraction = static_cast<double>(report.hits) / static_cast<double>(report.samples);
    return report;
  }

  if (options.monte_carlo_samples == 0) throw std::invalid_argument("no Monte-Carlo samples");
  Rng rng(options.seed);
  std::vector<FieldElement> coeffs(4);
  const std::uint64_t mask = (std::uint64_t{1} << r) - 1;
  report.samples = options.monte_carlo_samples;
  for (std::uint64_t s = 0; s < report.samples; ++s) {
    for (auto& c : coeffs) c = FieldElement{static_cast<std::uint32_t>(rng.next() & mask)};
    const double sq = inner_square([&](std::size_t i) { return gen.bit(coeffs, i); });
    if (sq >= 0.5) ++report.hits;
  }
  const double p = static_cast<double>(report.hits) / static_cast<double>(report.samples);
  report.fraction = p;
  report.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(report.samples));
  return report;
}

SingleVectorReport single_vector_test(std::span<const double> x, double epsilon,
                                      const SingleVectorConfig& config) {
  const std::size_t cols = x.size();
  const std::size_t n = config.rows;
  if (n == 0 || n > cols) throw std::invalid_argument("single-vector test needs 1 <= n <= N");
  if (std::abs(norm2(x) - 1.0) > 1e-9) throw std::invalid_argument("x must be a unit vector");
  const double xi = static_cast<double>(n) / static_cast<double>(cols);
  if (epsilon < 0.0 || epsilon > config.epsilon_cap * std::sqrt(xi)) {
    throw std::invalid_argument("epsilon outside [0, cap * sqrt(xi)]");
  }

  SingleVectorReport report;
  report.rows = n;
  report.cols = cols;
  report.epsilon = epsilon;
  report.threshold = 6.0 * epsilon * std::sqrt(static_cast<double>(cols));
  report.trials = config.trials;

  SignMatrix a1;
  if (!config.redraw_a1) {
    BitSource bits = BitSource::deterministic(derive_seed(config.seed, "single-vector-a1", 0));
    a1 = build_kwise_factor(n, cols, config.k, bits);
  }
  for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
    if (config.redraw_a1) {
      BitSource bits =
          BitSource::deterministic(derive_seed(config.seed, "single-vector-a1", trial));
      a1 = build_kwise_factor(n, cols, config.k, bits);
    }
    BitSource walk_bits =
        BitSource::deterministic(derive_seed(config.seed, "single-vector-a2", trial));
    const SignMatrix a = hadamard(a1, build_walk_factor(n, cols, walk_bits));
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) s += a.negative(i, j) ? -x[j] : x[j];
      norm_sq += s * s;
    }
    if (std::sqrt(norm_sq) < report.threshold) ++report.hits;
  }
  if (config.trials) {
    const double t = static_cast<double>(config.trials);
    report.probability = static_cast<double>(report.hits) / t;
    report.standard_error = std::sqrt(report.probability * (1.0 - report.probability) / t);
  }
  return report;
}

KernelBasis coordinate_subspace(std::size_t ambient, std::size_t dim) {
  if (dim > ambient) throw std::invalid_argument("subspace dimension exceeds ambient dimension");
  KernelBasis basis;
  basis.ambient = ambient;
  basis.rank = ambient - dim;
  basis.vectors = Matrix(dim, ambient);
  for (std::size_t i = 0; i < dim; ++i) basis.vectors(i, i) = 1.0;
  return basis;
}

DistortionReport estimate_distortion(const KernelBasis& basis, const DistortionConfig& config) {
  const std::size_t dim = basis.dim();
  const std::size_t cols = basis.ambient;
  if (dim == 0) throw std::invalid_argument("distortion of the zero subspace is undefined");
  const Matrix& b = basis.vectors;

  DistortionReport report;
  report.ambient = cols;
  report.dim = dim;
  report.baseline = 1.0 / std::sqrt(static_cast<double>(cols));
  report.samples = config.samples;
  report.restarts = config.restarts;
  report.delta = INFINITY;

  Rng rng(config.seed);
  std::vector<double> coeff(dim), x(cols), g(cols);

  const auto consider = [&](std::span<const double> v) {
    const double r = ratio(v);
    ++report.evaluated;
    report.max_ratio = std::max(report.max_ratio, r);
    if (r > 1.0 + DistortionReport::kRatioSlack) ++report.upper_bound_violations;
    if (r < report.delta) {
      report.delta = r;
      report.witness.assign(v.begin(), v.end());
    }
    return r;
  };
  const auto random_point = [&](std::span<double> out) {
    for (auto& c : coeff) c = rng.normal();
    b.multiply_transposed(coeff, out);
    normalize(out);
  };
  const auto reproject = [&](std::span<double> v) {
    b.multiply(v, coeff);
    b.multiply_transposed(coeff, v);
    normalize(v);
  };

  for (std::uint64_t s = 0; s < config.samples; ++s) {
    random_point(x);
    consider(x);
  }
  if (config.coordinate_candidates) {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t q = 0; q < dim; ++q) coeff[q] = b(q, j);
      b.multiply_transposed(coeff, x);
      if (norm2(x) < 1e-12) continue;
      normalize(x);
      consider(x);
    }
  }

  std::vector<double> sign(cols);
  for (std::uint64_t restart = 0; restart < config.restarts; ++restart) {
    if (restart == 0 && !report.witness.empty()) {
      x = report.witness;
    } else {
      random_point(x);
    }
    double best = consider(x);
    for (std::uint64_t t = 1; t <= config.iterations; ++t) {
      for (std::size_t j = 0; j < cols; ++j) sign[j] = (x[j] > 0.0) - (x[j] < 0.0);
      b.multiply(sign, coeff);
      b.multiply_transposed(coeff, g);  // projection of sign(x) onto the subspace
      const double radial = dot(g, x);
      for (std::size_t j = 0; j < cols; ++j) g[j] -= radial * x[j];
      const double g_norm = norm2(g);
      ++report.iterations;
      if (g_norm < 1e-14) break;
      const double s = config.step / std::sqrt(static_cast<double>(t));
      for (std::size_t j = 0; j < cols; ++j) x[j] -= s * g[j] / g_norm;
      if (t % 50 == 0) {
        reproject(x);
      } else {
        normalize(x);
      }
      best = std::min(best, consider(x));
    }
    report.restart_best.push_back(best);
  }
  return report;
}

}  // namespace kashin
