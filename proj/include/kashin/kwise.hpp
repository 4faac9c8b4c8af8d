#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kashin/gf2.hpp"

namespace kashin {

// Sample space of M k-wise independent unbiased signs generated from k*r
// seed bits (Alon-Babai-Itai). The seed is read as k field elements
// Z_0..Z_{k-1} (r bits each, little-endian); coordinate i (1-based) takes
// Y_i = sum_j alpha_i^j Z_j with alpha_i the field element encoded by i, and
// emits the sign (-1)^{lsb(Y_i)}.
class KwiseGenerator {
 public:
  // Throws std::invalid_argument if k == 0, the degree is unsupported, or
  // count > 2^r - 1.
  KwiseGenerator(unsigned k, unsigned r, std::uint64_t count);

  unsigned independence() const { return k_; }
  unsigned degree() const { return field_.degree(); }
  std::uint64_t size() const { return count_; }
  std::uint64_t modulus() const { return field_.modulus(); }
  unsigned seed_length() const { return k_ * field_.degree(); }
  const GaloisField& field() const { return field_; }

  // Splits a k*r bit seed into Z_0..Z_{k-1}. Throws on length mismatch.
  std::vector<FieldElement> coefficients(const std::vector<bool>& seed) const;
  // Same, from a packed integer seed (requires k*r <= 64).
  std::vector<FieldElement> coefficients(std::uint64_t seed) const;

  // Output bit (0 => +1, 1 => -1) of coordinate `index` in [0, size()).
  bool bit(std::span<const FieldElement> coeffs, std::uint64_t index) const {
    const FieldElement alpha{static_cast<std::uint32_t>(index + 1)};
    FieldElement y = coeffs[k_ - 1];
    for (unsigned j = k_ - 1; j-- > 0;) {
      y = GaloisField::add(field_.mul(y, alpha), coeffs[j]);
    }
    return (y.value & 1u) != 0;
  }

  template <typename Sink>
  void for_each_bit(std::span<const FieldElement> coeffs, Sink&& sink) const {
    for (std::uint64_t i = 0; i < count_; ++i) sink(i, bit(coeffs, i));
  }

  // All size() output bits packed LSB-first (bit i of word i / 64). Same values
  // as bit(), evaluated blockwise: alpha = H + L with L in the low bits, the
  // polynomial is Taylor-shifted to H once per block, and lsb is linear in L^t.
  std::vector<std::uint64_t> packed_bits(std::span<const FieldElement> coeffs) const;

  // lsb(Y_i) is GF(2)-linear in the seed: bit_i = parity(seed & functional(i)).
  // Requires k*r <= 64; the mask uses the same bit layout as the seed.
  std::uint64_t functional(std::uint64_t index) const;

 private:
  unsigned k_;
  GaloisField field_;
  std::uint64_t count_;
};

// Signs (+1/-1) of all size() coordinates for a k*r bit seed.
std::vector<int> kwise_expand(const KwiseGenerator& gen, const std::vector<bool>& seed);

// Packed-seed form of kwise_expand (requires k*r <= 64).
std::vector<int> kwise_expand(const KwiseGenerator& gen, std::uint64_t seed);

struct KwiseReport {
  unsigned subset_size = 0;
  std::uint64_t seeds = 0;
  std::uint64_t subsets_checked = 0;
  std::uint64_t subsets_total = 0;  // C(M, j); may exceed subsets_checked
  // largest |count(pattern) - seeds / 2^j| over checked subsets and patterns
  std::uint64_t max_count_deviation = 0;
  // same, as a frequency: |count / seeds - 2^-j|
  double max_deviation = 0.0;
  bool exact() const { return max_count_deviation == 0; }
};

inline constexpr unsigned kMaxEnumeratedSeedBits = 24;

// Enumerates all 2^{k*r} seeds and measures how far every j-subset of output
// coordinates is from uniform. When C(M, j) exceeds `max_subsets`, a fixed
// pseudo-random selection of that many subsets is checked.
// Throws std::invalid_argument if k*r > 24, j == 0, or j > min(M, 63).
KwiseReport verify_kwise_exhaustive(const KwiseGenerator& gen, unsigned j,
                                    std::uint64_t max_subsets = 100000);

}  // namespace kashin
