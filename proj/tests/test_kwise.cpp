#include "doctest.h"

#include <bit>
#include <map>
#include <stdexcept>

#include "kashin/kwise.hpp"

using namespace kashin;

TEST_CASE("zero seed gives all +1") {
  const KwiseGenerator gen(5, 4, 15);
  for (const int s : kwise_expand(gen, std::vector<bool>(20, false))) CHECK(s == 1);
}

TEST_CASE("k=1, r=1, M=1 passes the seed bit through") {
  const KwiseGenerator gen(1, 1, 1);
  CHECK(kwise_expand(gen, std::vector<bool>{false}) == std::vector<int>{1});
  CHECK(kwise_expand(gen, std::vector<bool>{true}) == std::vector<int>{-1});
}

TEST_CASE("k=2, r=2, M=3: exact pairwise counts over 16 seeds") {
  const KwiseGenerator gen(2, 2, 3);
  std::vector<std::vector<int>> outs;
  for (std::uint64_t s = 0; s < 16; ++s) outs.push_back(kwise_expand(gen, s));
  for (int i = 0; i < 3; ++i) {
    int neg = 0;
    for (const auto& o : outs) neg += o[i] < 0;
    CHECK(neg == 8);
    for (int j = i + 1; j < 3; ++j) {
      std::map<std::pair<int, int>, int> counts;
      for (const auto& o : outs) ++counts[{o[i], o[j]}];
      CHECK(counts.size() == 4);
      for (const auto& [pattern, c] : counts) CHECK(c == 4);
    }
  }
}

TEST_CASE("verify_kwise_exhaustive examples") {
  const KwiseGenerator g4(4, 3, 7);
  const auto rep = verify_kwise_exhaustive(g4, 4);
  CHECK(rep.exact());
  CHECK(rep.seeds == 4096);
  CHECK(rep.subsets_checked == 35);

  const KwiseGenerator g2(2, 2, 3);
  CHECK(verify_kwise_exhaustive(g2, 2).exact());
  // the three output functionals z00+z10, z00+z11, z00+z10+z11 are linearly
  // independent, so this particular space is exactly 3-wise uniform
  CHECK(verify_kwise_exhaustive(g2, 3).exact());
  // beyond k: four coordinates whose alphas sum to 0 have dependent outputs
  const KwiseGenerator g3(2, 3, 7);
  CHECK(verify_kwise_exhaustive(g3, 2).exact());
  CHECK_FALSE(verify_kwise_exhaustive(g3, 4).exact());

  for (unsigned k : {1u, 2u, 3u}) {
    const KwiseGenerator g(k, 4, 15);
    CHECK(verify_kwise_exhaustive(g, 1).exact());
  }
  for (unsigned j = 1; j <= 5; ++j) CHECK(verify_kwise_exhaustive(KwiseGenerator(5, 3, 7), j).exact());
}

TEST_CASE("k=2, r=2, M=3: all 8 triple patterns twice each (direct count)") {
  const KwiseGenerator gen(2, 2, 3);
  std::map<std::vector<int>, int> counts;
  for (std::uint64_t s = 0; s < 16; ++s) ++counts[kwise_expand(gen, s)];
  CHECK(counts.size() == 8);
  for (const auto& [pattern, c] : counts) CHECK(c == 2);
}

TEST_CASE("k=2, r=3, M=7: alphas 1, 2, 4, 7 sum to 0, so their signs multiply to +1") {
  const KwiseGenerator gen(2, 3, 7);
  // coordinates are 0-based: alpha_i is the element encoded by i + 1
  for (std::uint64_t s = 0; s < 64; ++s) {
    const auto o = kwise_expand(gen, s);
    CHECK(o[0] * o[1] * o[3] * o[6] == 1);
  }
}

TEST_CASE("functional masks, Horner and packed evaluation agree") {
  const KwiseGenerator gen(6, 7, 127);
  std::uint64_t seed = 0x123456789abull;
  for (int round = 0; round < 50; ++round) {
    seed = seed * 6364136223846793005ull + 1;
    const std::uint64_t s = seed >> 22;  // 42 bits
    const auto coeffs = gen.coefficients(s);
    const auto packed = gen.packed_bits(coeffs);
    for (std::uint64_t i = 0; i < gen.size(); ++i) {
      const bool horner = gen.bit(coeffs, i);
      REQUIRE(horner == ((std::popcount(s & gen.functional(i)) & 1) != 0));
      REQUIRE(horner == (((packed[i / 64] >> (i % 64)) & 1u) != 0));
    }
  }
}

TEST_CASE("packed evaluation across block sizes") {
  for (unsigned r : {2u, 5u, 6u, 12u, 13u, 15u}) {
    for (unsigned k : {1u, 3u, 11u}) {
      const std::uint64_t count = (std::uint64_t{1} << r) - 1 - r;
      const KwiseGenerator gen(k, r, count);
      std::vector<FieldElement> coeffs;
      for (unsigned j = 0; j < k; ++j) {
        coeffs.push_back(FieldElement{static_cast<std::uint32_t>((j * 40503u + 7 * r) & ((1u << r) - 1))});
      }
      const auto packed = gen.packed_bits(coeffs);
      CHECK(packed.size() == (count + 63) / 64);
      bool same = true;
      for (std::uint64_t i = 0; i < count; ++i) {
        same = same && gen.bit(coeffs, i) == (((packed[i / 64] >> (i % 64)) & 1u) != 0);
      }
      CHECK(same);
    }
  }
}

TEST_CASE("expansion is a pure function of the seed") {
  const KwiseGenerator gen(4, 5, 31);
  std::vector<bool> seed(20);
  for (int i = 0; i < 20; ++i) seed[i] = (i * 7) % 3 == 0;
  CHECK(kwise_expand(gen, seed) == kwise_expand(gen, seed));
}

TEST_CASE("seed layout: Z_j is bits [j r, (j+1) r), little-endian") {
  const KwiseGenerator gen(3, 4, 15);
  const auto c = gen.coefficients(0x0a5cull);
  CHECK(c[0].value == 0xc);
  CHECK(c[1].value == 0x5);
  CHECK(c[2].value == 0xa);
  std::vector<bool> bits(12);
  for (int i = 0; i < 12; ++i) bits[i] = (0x0a5c >> i) & 1;
  CHECK(gen.coefficients(bits) == c);
}

TEST_CASE("invalid generators") {
  CHECK_THROWS_AS(KwiseGenerator(0, 3, 7), std::invalid_argument);
  CHECK_THROWS_AS(KwiseGenerator(2, 3, 8), std::invalid_argument);
  CHECK_THROWS_AS(KwiseGenerator(2, 40, 8), std::invalid_argument);
  const KwiseGenerator big(4, 8, 255);
  CHECK_THROWS_AS(verify_kwise_exhaustive(big, 2), std::invalid_argument);
  CHECK_THROWS_AS(verify_kwise_exhaustive(KwiseGenerator(2, 2, 3), 0), std::invalid_argument);
  CHECK_THROWS_AS(verify_kwise_exhaustive(KwiseGenerator(2, 2, 3), 4), std::invalid_argument);
}
