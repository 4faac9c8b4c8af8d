#include "doctest.h"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

#include "kashin/builder.hpp"
#include "kashin/expander.hpp"
#include "kashin/kwise.hpp"

using namespace kashin;

namespace {

std::vector<bool> bits_of(std::uint64_t value, unsigned count) {
  std::vector<bool> out(count);
  for (unsigned i = 0; i < count; ++i) out[i] = (value >> i) & 1u;
  return out;
}

}  // namespace

TEST_CASE("bit budget examples") {
  const auto big = bit_budget(512, 1024, 20);
  CHECK(big.bits_a1 == 400);
  CHECK(big.bits_a2_start == 44);
  CHECK(big.bits_a2_walk == 1533);
  CHECK(big.bits_total == 1977);
  CHECK(bit_budget(1, 1, 1).bits_total == 5);
  CHECK(bit_budget(2, 3, 4).bits_a1 == 12);
  const auto small = bit_budget(4, 7, 2);
  CHECK(small.bits_a2_start + small.bits_a2_walk == 21);
  CHECK(small.expander_side == 64);
}

TEST_CASE("1977 bits drawn by a real N=1024 build") {
  BitSource bits = BitSource::deterministic({0x19, 0x77});
  CHECK(default_independence(1024) == 20);
  const auto c = build_construction(rows_for(1024, 0.5), 1024, 20, bits);
  CHECK(bits.consumed() == 1977);
  CHECK(c.report.bits_total == 1977);
}

TEST_CASE("bits_total <= 4N for N = 2^8 .. 2^16 at eta = 1/2") {
  for (unsigned e = 8; e <= 16; ++e) {
    const std::size_t cols = std::size_t{1} << e;
    const auto rep = bit_budget(rows_for(cols, 0.5), cols, default_independence(cols));
    CHECK(rep.bits_total <= 4 * cols);
  }
}

TEST_CASE("rows_for rounding") {
  CHECK(rows_for(128, 0.5) == 64);
  CHECK(rows_for(10, 0.25) == 7);  // 7.5 rounds down
  CHECK(rows_for(10, 0.34) == 7);
  CHECK_THROWS_AS(rows_for(8, 0.99), std::invalid_argument);
  CHECK_THROWS_AS(rows_for(8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rows_for(8, 0.0), std::invalid_argument);
}

TEST_CASE("default independence respects sqrt(N)") {
  CHECK(default_independence(1024) == 20);
  CHECK(default_independence(128) == 10);
  CHECK(default_independence(16) == 4);
  CHECK(default_independence(4) == 2);
  for (std::size_t n = 4; n < 5000; n += 37) {
    const unsigned k = default_independence(n);
    CHECK(k % 2 == 0);
    CHECK(k * k <= n);
  }
}

TEST_CASE("1x1 construction") {
  BitSource bits = BitSource::deterministic({1});
  const auto c = build_construction(1, 1, 3, bits);
  CHECK(c.product.rows() == 1);
  CHECK(c.product.cols() == 1);
  CHECK(bits.consumed() == bit_budget(1, 1, 3).bits_total);
}

TEST_CASE("A1 is the row-major k-wise expansion") {
  const unsigned k = 4;
  const std::size_t n = 5, cols = 9;
  const std::uint64_t seed = 0xabcdeull;
  const unsigned r = field_degree_for(n * cols);
  BitSource bits = BitSource::recorded(bits_of(seed, k * r));
  const auto a1 = build_kwise_factor(n, cols, k, bits);
  const auto expected = kwise_expand(KwiseGenerator(k, r, n * cols), seed & ((1ull << (k * r)) - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cols; ++j) CHECK(a1.at(i, j) == expected[i * cols + j]);
  }
  CHECK(a1.provenance() == Provenance::a1);
}

TEST_CASE("n=2, N=3, k=4: A1 entries are 4-wise uniform over all seeds") {
  std::vector<SignMatrix> all;
  for (std::uint64_t s = 0; s < 4096; ++s) {
    BitSource bits = BitSource::recorded(bits_of(s, 12));
    all.push_back(build_kwise_factor(2, 3, 4, bits));
    REQUIRE(bits.consumed() == 12);
  }
  // adversarial fixed A2: the product must stay 4-wise uniform
  SignMatrix adversary(2, 3, Provenance::a2);
  adversary.set(0, 1, -1);
  adversary.set(1, 0, -1);
  adversary.set(1, 2, -1);
  for (const bool use_product : {false, true}) {
    int bad = 0;
    for (unsigned mask = 0; mask < 64; ++mask) {
      if (std::popcount(mask) != 4) continue;
      std::array<int, 16> counts{};
      for (const auto& a1 : all) {
        const SignMatrix a = use_product ? hadamard(a1, adversary) : a1;
        unsigned pattern = 0, l = 0;
        for (unsigned e = 0; e < 6; ++e) {
          if ((mask >> e) & 1u) pattern |= (a.negative(e / 3, e % 3) ? 1u : 0u) << l++;
        }
        ++counts[pattern];
      }
      for (const int c : counts) bad += c != 256;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("A2 with n=1 draws 4r bits and is one 4-wise row") {
  BitSource bits = BitSource::deterministic({3});
  const auto a2 = build_walk_factor(1, 7, bits);
  CHECK(bits.consumed() == 12);
  CHECK(a2.rows() == 1);
}

TEST_CASE("A2 rows are 4-wise expansions of the walk vertices") {
  const std::size_t cols = 7;
  const unsigned r = 3;
  BitSource bits = BitSource::deterministic({0x77});
  const auto a2 = build_walk_factor(64, cols, bits);
  CHECK(bits.consumed() == 4 * r + 3 * 63);

  BitSource replay = BitSource::deterministic({0x77});
  const ExpanderGraph g(std::uint64_t{1} << (2 * r));
  const KwiseGenerator gen(4, r, cols);
  auto state = start_walk(g, replay);
  for (std::size_t i = 0; i < 64; ++i) {
    if (i) step_walk(g, state, replay);
    const std::uint64_t seed = state.current.x | (state.current.y << (2 * r));
    const auto row = kwise_expand(gen, seed);
    for (std::size_t j = 0; j < cols; ++j) REQUIRE(a2.at(i, j) == row[j]);
  }
}

TEST_CASE("N=7: every row of A2 is marginally uniform over the 4096 seeds") {
  // the start is uniform and P is doubly stochastic, so each step's vertex is
  // uniform; vertex -> seed is a bijection onto 12-bit seeds
  const ExpanderGraph g(64);
  const std::size_t n = g.vertex_count();
  CHECK(n == 4096);
  std::vector<bool> seen(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    const Vertex u = g.vertex(v);
    const std::uint64_t seed = u.x | (u.y << 6);
    REQUIRE(seed < n);
    seen[seed] = true;
  }
  CHECK(std::count(seen.begin(), seen.end(), true) == static_cast<long>(n));
  std::vector<double> dist(n, 1.0 / n), next(n);
  for (int step = 0; step < 63; ++step) {
    g.apply(dist, next);
    dist.swap(next);
  }
  double worst = 0;
  for (const double d : dist) worst = std::max(worst, std::abs(d - 1.0 / n));
  CHECK(worst < 1e-15);
}

TEST_CASE("construction is deterministic in the seed") {
  BitSource b1 = BitSource::deterministic({9, 9});
  BitSource b2 = BitSource::deterministic({9, 9});
  BitSource b3 = BitSource::deterministic({9, 8});
  const auto c1 = build_construction(30, 70, 8, b1);
  const auto c2 = build_construction(30, 70, 8, b2);
  const auto c3 = build_construction(30, 70, 8, b3);
  CHECK(c1.a1.same_entries(c2.a1));
  CHECK(c1.a2.same_entries(c2.a2));
  CHECK(c1.product.same_entries(c2.product));
  CHECK_FALSE(c1.product.same_entries(c3.product));
  CHECK(c1.product.provenance() == Provenance::product);
}

TEST_CASE("hadamard properties") {
  BitSource bits = BitSource::deterministic({5});
  const auto c = build_construction(13, 70, 4, bits);
  const SignMatrix ones(13, 70, Provenance::external);
  const auto sq = hadamard(c.a1, c.a1);
  CHECK(sq.same_entries(ones));
  CHECK(hadamard(c.a1, ones).same_entries(c.a1));
  CHECK(hadamard(c.a1, c.a2).same_entries(hadamard(c.a2, c.a1)));
  for (std::size_t i = 0; i < 13; ++i) {
    for (std::size_t j = 0; j < 70; ++j) CHECK(c.product.at(i, j) == c.a1.at(i, j) * c.a2.at(i, j));
  }
  CHECK_THROWS_AS(hadamard(c.a1, SignMatrix(13, 71, Provenance::external)), std::invalid_argument);
}

TEST_CASE("recorded bits that run short are an error") {
  BitSource bits = BitSource::recorded(std::vector<bool>(10, true));
  CHECK_THROWS_AS(build_construction(2, 3, 4, bits), BitSourceExhausted);
}
