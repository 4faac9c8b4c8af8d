#include "kashin/builder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kashin/expander.hpp"
#include "kashin/kwise.hpp"

namespace kashin {

namespace {

constexpr unsigned kWalkIndependence = 4;

std::vector<FieldElement> draw_coefficients(unsigned k, unsigned r, BitSource& bits) {
  std::vector<FieldElement> coeffs(k);
  for (auto& c : coeffs) c = FieldElement{static_cast<std::uint32_t>(bits.take(r))};
  return coeffs;
}

}  // namespace

unsigned field_degree_for(std::uint64_t count) {
  return static_cast<unsigned>(std::bit_width(count));
}

std::size_t rows_for(std::size_t cols, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
  const double target = (1.0 - eta) * static_cast<double>(cols);
  const auto rows = static_cast<std::size_t>(std::ceil(target - 0.5));
  if (rows == 0) {
    throw std::invalid_argument("n = (1 - eta) * N rounds to 0 for N = " + std::to_string(cols));
  }
  return rows;
}

unsigned default_independence(std::size_t cols) {
  unsigned k = 2 * field_degree_for(cols > 0 ? cols - 1 : 0);  // 2 ceil(log2 N)
  const auto root = static_cast<unsigned>(std::sqrt(static_cast<double>(cols)));
  const unsigned cap = root - root % 2;
  if (k > cap) k = cap;
  return k < 2 ? 2 : k;
}

BuildReport bit_budget(std::size_t rows, std::size_t cols, unsigned k) {
  if (rows == 0 || rows > cols) throw std::invalid_argument("bit_budget needs 1 <= n <= N");
  if (k == 0) throw std::invalid_argument("independence order k must be positive");
  BuildReport report;
  report.rows = rows;
  report.cols = cols;
  report.k = k;
  report.kwise_degree = field_degree_for(static_cast<std::uint64_t>(rows) * cols);
  report.walk_degree = field_degree_for(cols);
  report.expander_side = std::uint64_t{1} << (2 * report.walk_degree);
  report.bits_a1 = std::uint64_t{k} * report.kwise_degree;
  report.bits_a2_start = 4ull * report.walk_degree;
  report.bits_a2_walk = 3ull * (rows - 1);
  report.bits_total = report.bits_a1 + report.bits_a2_start + report.bits_a2_walk;
  return report;
}

SignMatrix build_kwise_factor(std::size_t rows, std::size_t cols, unsigned k, BitSource& bits) {
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  const unsigned r = field_degree_for(count);
  if (r > kMaxFieldDegree) throw std::invalid_argument("n * N exceeds 2^32 - 1 coordinates");
  const KwiseGenerator gen(k, r, count);
  const auto coeffs = draw_coefficients(k, r, bits);
  const auto flat = gen.packed_bits(coeffs);
  SignMatrix out(rows, cols, Provenance::a1);
  for (std::size_t i = 0; i < rows; ++i) {
    auto words = out.row_words(i);
    const std::uint64_t start = static_cast<std::uint64_t>(i) * cols;
    for (std::size_t w = 0; w < words.size(); ++w) {
      const std::uint64_t pos = start + 64 * w;
      const std::size_t word = pos / 64;
      const unsigned shift = pos % 64;
      std::uint64_t v = flat[word] >> shift;
      if (shift && word + 1 < flat.size()) v |= flat[word + 1] << (64 - shift);
      const std::size_t valid = std::min<std::size_t>(64, cols - 64 * w);
      if (valid < 64) v &= (std::uint64_t{1} << valid) - 1;
      words[w] = v;
    }
  }
  return out;
}

SignMatrix build_walk_factor(std::size_t rows, std::size_t cols, BitSource& bits) {
  if (rows == 0) throw std::invalid_argument("A2 needs at least one row");
  const unsigned r = field_degree_for(cols);
  if (2 * r > 62) throw std::invalid_argument("N too large for the walk factor");
  const KwiseGenerator gen(kWalkIndependence, r, cols);
  const ExpanderGraph graph(std::uint64_t{1} << (2 * r));
  const std::uint64_t half_mask = (std::uint64_t{1} << r) - 1;

  const bool packed = gen.seed_length() <= 64;
  std::vector<std::uint64_t> functionals;
  if (packed) {
    functionals.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) functionals[j] = gen.functional(j);
  }

  SignMatrix out(rows, cols, Provenance::a2);
  WalkState state = start_walk(graph, bits);
  for (std::size_t i = 0; i < rows; ++i) {
    if (i > 0) step_walk(graph, state, bits);
    const Vertex v = state.current;
    auto words = out.row_words(i);
    if (packed) {
      const std::uint64_t seed = v.x | (v.y << (2 * r));
      for (std::size_t j = 0; j < cols; ++j) {
        if (std::popcount(seed & functionals[j]) & 1) words[j / 64] |= std::uint64_t{1} << (j % 64);
      }
    } else {
      const std::vector<FieldElement> coeffs{
          FieldElement{static_cast<std::uint32_t>(v.x & half_mask)},
          FieldElement{static_cast<std::uint32_t>(v.x >> r)},
          FieldElement{static_cast<std::uint32_t>(v.y & half_mask)},
          FieldElement{static_cast<std::uint32_t>(v.y >> r)}};
      for (std::size_t j = 0; j < cols; ++j) {
        if (gen.bit(coeffs, j)) words[j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  }
  return out;
}

Construction build_construction(std::size_t rows, std::size_t cols, unsigned k, BitSource& bits) {
  Construction c;
  c.report = bit_budget(rows, cols, k);
  const std::uint64_t before = bits.consumed();
  c.a1 = build_kwise_factor(rows, cols, k, bits);
  c.a2 = build_walk_factor(rows, cols, bits);
  c.product = hadamard(c.a1, c.a2);
  const std::uint64_t used = bits.consumed() - before;
  if (used != c.report.bits_total) {
    throw std::logic_error("construction drew " + std::to_string(used) + " bits, budget says " +
                           std::to_string(c.report.bits_total));
  }
  return c;
}

}  // namespace kashin
