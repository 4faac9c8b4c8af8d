#include "kashin/kwise.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

#include "kashin/random.hpp"

namespace kashin {

namespace {

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // acc = C(n-k+i, i), always an integer
    acc = acc * (n - k + i) / i;
    if (acc > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(acc);
}

// Advances `subset` (sorted, values < n) to the next combination; false at end.
bool next_combination(std::vector<std::uint64_t>& subset, std::uint64_t n) {
  const std::size_t j = subset.size();
  for (std::size_t pos = j; pos-- > 0;) {
    if (subset[pos] < n - (j - pos)) {
      ++subset[pos];
      for (std::size_t q = pos + 1; q < j; ++q) subset[q] = subset[q - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

KwiseGenerator::KwiseGenerator(unsigned k, unsigned r, std::uint64_t count)
    : k_(k), field_(r), count_(count) {
  if (k == 0) throw std::invalid_argument("independence order k must be positive");
  if (count > field_.order() - 1) {
    throw std::invalid_argument("GF(2^" + std::to_string(r) + ") supports at most " +
                                std::to_string(field_.order() - 1) + " coordinates, requested " +
                                std::to_string(count));
  }
}

std::vector<FieldElement> KwiseGenerator::coefficients(const std::vector<bool>& seed) const {
  if (seed.size() != seed_length()) {
    throw std::invalid_argument("seed has " + std::to_string(seed.size()) +
                                " bits, generator expects " + std::to_string(seed_length()));
  }
  const unsigned r = degree();
  std::vector<FieldElement> coeffs(k_);
  for (unsigned j = 0; j < k_; ++j) {
    std::uint32_t value = 0;
    for (unsigned t = 0; t < r; ++t) {
      if (seed[j * r + t]) value |= std::uint32_t{1} << t;
    }
    coeffs[j] = FieldElement{value};
  }
  return coeffs;
}

std::vector<FieldElement> KwiseGenerator::coefficients(std::uint64_t seed) const {
  if (seed_length() > 64) {
    throw std::invalid_argument("packed seeds need k*r <= 64");
  }
  if (seed_length() < 64 && (seed >> seed_length()) != 0) {
    throw std::invalid_argument("packed seed wider than k*r bits");
  }
  const unsigned r = degree();
  const std::uint64_t mask = (std::uint64_t{1} << r) - 1;
  std::vector<FieldElement> coeffs(k_);
  for (unsigned j = 0; j < k_; ++j) {
    coeffs[j] = FieldElement{static_cast<std::uint32_t>((seed >> (j * r)) & mask)};
  }
  return coeffs;
}

std::uint64_t KwiseGenerator::functional(std::uint64_t index) const {
  if (seed_length() > 64) throw std::invalid_argument("functional masks need k*r <= 64");
  if (index >= count_) throw std::out_of_range("coordinate index out of range");
  const unsigned r = degree();
  const FieldElement alpha{static_cast<std::uint32_t>(index + 1)};
  std::uint64_t mask = 0;
  FieldElement power{1};
  for (unsigned j = 0; j < k_; ++j) {
    // lsb(Z * c) = parity(Z & w) with w_t = lsb(x^t * c)
    for (unsigned t = 0; t < r; ++t) {
      const FieldElement basis{std::uint32_t{1} << t};
      if (field_.mul(basis, power).value & 1u) mask |= std::uint64_t{1} << (j * r + t);
    }
    power = field_.mul(power, alpha);
  }
  return mask;
}

std::vector<std::uint64_t> KwiseGenerator::packed_bits(
    std::span<const FieldElement> coeffs) const {
  if (coeffs.size() != k_) throw std::invalid_argument("expected k coefficients");
  const unsigned r = degree();
  const std::uint64_t mod = field_.modulus();
  const unsigned b = std::min(r, 12u);
  const std::uint64_t block = std::uint64_t{1} << b;
  const std::size_t block_words = (block + 63) / 64;

  // columns[(t * r + p) * block_words ..]: bit l is bit p of (element l)^t
  std::vector<std::uint64_t> columns(std::size_t{k_} * r * block_words, 0);
  for (std::uint64_t l = 0; l < block; ++l) {
    FieldElement power{1};
    const FieldElement low{static_cast<std::uint32_t>(l)};
    for (unsigned t = 0; t < k_; ++t) {
      for (unsigned p = 0; p < r; ++p) {
        if ((power.value >> p) & 1u) {
          columns[(std::size_t{t} * r + p) * block_words + l / 64] |= std::uint64_t{1} << (l % 64);
        }
      }
      power = field_.mul(power, low);
    }
  }

  // element bits for elements 0 .. count_ (index i is element i + 1)
  const std::uint64_t elements = count_ + 1;
  std::vector<std::uint64_t> element_bits(((elements + block - 1) / block) * block_words, 0);
  std::vector<FieldElement> high_powers(k_), shifted(k_);
  for (std::uint64_t h = 0; h * block < elements; ++h) {
    const FieldElement high{static_cast<std::uint32_t>(h << b)};
    high_powers[0] = FieldElement{1};
    for (unsigned j = 1; j < k_; ++j) high_powers[j] = field_.mul(high_powers[j - 1], high);
    // (H + L)^j = sum over t subset of j of H^(j - t) L^t (Lucas)
    std::fill(shifted.begin(), shifted.end(), FieldElement{0});
    for (unsigned j = 0; j < k_; ++j) {
      for (unsigned t = j;; t = (t - 1) & j) {
        shifted[t] = GaloisField::add(shifted[t], field_.mul(coeffs[j], high_powers[j ^ t]));
        if (t == 0) break;
      }
    }
    std::uint64_t* out = element_bits.data() + h * block_words;
    for (unsigned t = 0; t < k_; ++t) {
      // lsb(x^p * Q) for p = 0 .. r-1
      std::uint64_t c = shifted[t].value;
      for (unsigned p = 0; p < r; ++p) {
        if (c & 1u) {
          const std::uint64_t* col = columns.data() + (std::size_t{t} * r + p) * block_words;
          for (std::size_t w = 0; w < block_words; ++w) out[w] ^= col[w];
        }
        c <<= 1;
        if (c >> r) c ^= mod;
      }
    }
  }
  if (block < 64) {
    // blocks narrower than a word: repack contiguously
    std::vector<std::uint64_t> dense((elements + 63) / 64, 0);
    for (std::uint64_t e = 0; e < elements; ++e) {
      if ((element_bits[e / block] >> (e % block)) & 1u) dense[e / 64] |= std::uint64_t{1} << (e % 64);
    }
    element_bits = std::move(dense);
  }

  std::vector<std::uint64_t> bits((count_ + 63) / 64, 0);
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t v = element_bits[w] >> 1;
    if (w + 1 < element_bits.size()) v |= element_bits[w + 1] << 63;
    bits[w] = v;
  }
  if (count_ % 64) bits.back() &= (std::uint64_t{1} << (count_ % 64)) - 1;
  return bits;
}

std::vector<int> kwise_expand(const KwiseGenerator& gen, const std::vector<bool>& seed) {
  const auto coeffs = gen.coefficients(seed);
  std::vector<int> signs(gen.size());
  gen.for_each_bit(coeffs, [&](std::uint64_t i, bool b) { signs[i] = b ? -1 : 1; });
  return signs;
}

std::vector<int> kwise_expand(const KwiseGenerator& gen, std::uint64_t seed) {
  const auto coeffs = gen.coefficients(seed);
  std::vector<int> signs(gen.size());
  gen.for_each_bit(coeffs, [&](std::uint64_t i, bool b) { signs[i] = b ? -1 : 1; });
  return signs;
}

KwiseReport verify_kwise_exhaustive(const KwiseGenerator& gen, unsigned j,
                                    std::uint64_t max_subsets) {
  const unsigned seed_bits = gen.seed_length();
  if (seed_bits > kMaxEnumeratedSeedBits) {
    throw std::invalid_argument("exhaustive check needs k*r <= 24, got " +
                                std::to_string(seed_bits));
  }
  const std::uint64_t m = gen.size();
  if (j == 0 || j > m || j > 63) {
    throw std::invalid_argument("subset size must lie in [1, min(M, 63)]");
  }
  if (max_subsets == 0) throw std::invalid_argument("max_subsets must be positive");

  KwiseReport report;
  report.subset_size = j;
  report.seeds = std::uint64_t{1} << seed_bits;
  report.subsets_total = binomial_saturating(m, j);

  std::vector<std::uint64_t> masks(m);
  for (std::uint64_t i = 0; i < m; ++i) masks[i] = gen.functional(i);

  const std::uint64_t patterns = std::uint64_t{1} << j;
  std::vector<std::uint64_t> counts(patterns);
  const auto check = [&](const std::vector<std::uint64_t>& subset) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t seed = 0; seed < report.seeds; ++seed) {
      std::uint64_t pattern = 0;
      for (unsigned l = 0; l < j; ++l) {
        pattern |= static_cast<std::uint64_t>(std::popcount(seed & masks[subset[l]]) & 1) << l;
      }
      ++counts[pattern];
    }
    // uniform count is seeds / 2^j; compare count * 2^j against seeds to stay integral
    for (const auto c : counts) {
      const std::uint64_t scaled = c << j;
      const std::uint64_t diff = scaled > report.seeds ? scaled - report.seeds
                                                       : report.seeds - scaled;
      const std::uint64_t count_dev = (diff + patterns - 1) >> j;
      report.max_count_deviation = std::max(report.max_count_deviation, count_dev);
      report.max_deviation =
          std::max(report.max_deviation, static_cast<double>(diff) /
                                             static_cast<double>(report.seeds << j));
    }
    ++report.subsets_checked;
  };

  if (report.subsets_total <= max_subsets) {
    std::vector<std::uint64_t> subset(j);
    for (unsigned l = 0; l < j; ++l) subset[l] = l;
    do {
      check(subset);
    } while (next_combination(subset, m));
  } else {
    const std::vector<std::uint8_t> label{'k', 'w', 'i', 's', 'e'};
    Rng rng(label);
    std::vector<std::uint64_t> subset;
    for (std::uint64_t s = 0; s < max_subsets; ++s) {
      subset.clear();
      while (subset.size() < j) {
        const std::uint64_t pick = rng.below(m);
        if (std::find(subset.begin(), subset.end(), pick) == subset.end()) subset.push_back(pick);
      }
      std::sort(subset.begin(), subset.end());
      check(subset);
    }
  }
  return report;
}

}  // namespace kashin
