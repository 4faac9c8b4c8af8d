#pragma once

#include <cstdint>

#include "kashin/bit_source.hpp"
#include "kashin/sign_matrix.hpp"

namespace kashin {

// Bit accounting for one construction. All counts are exact.
struct BuildReport {
  std::size_t rows = 0;               // n
  std::size_t cols = 0;               // N
  unsigned k = 0;                     // independence order of A1
  unsigned kwise_degree = 0;          // r1 = ceil(log2(nN + 1))
  unsigned walk_degree = 0;           // r  = ceil(log2(N + 1))
  std::uint64_t expander_side = 0;    // m  = 2^(2r)
  std::uint64_t bits_a1 = 0;          // k * r1
  std::uint64_t bits_a2_start = 0;    // 2 log2(m) = 4r
  std::uint64_t bits_a2_walk = 0;     // 3 (n - 1)
  std::uint64_t bits_total = 0;
};

// ceil(log2(count + 1)): the smallest field degree with 2^r - 1 >= count.
unsigned field_degree_for(std::uint64_t count);

// n = round((1 - eta) * N), ties toward the smaller n. Throws
// std::invalid_argument when eta is outside (0, 1) or n rounds to 0.
std::size_t rows_for(std::size_t cols, double eta);

// 2 * ceil(log2 N), lowered to the largest even integer <= sqrt(N) when it
// exceeds that, and never below 2.
unsigned default_independence(std::size_t cols);

// Predicted bit consumption of build_construction(n, N, k, ...).
// Throws std::invalid_argument unless 1 <= n <= N and k >= 1.
BuildReport bit_budget(std::size_t rows, std::size_t cols, unsigned k);

// A1: one uniform element of the k-wise sample space with M = nN
// coordinates, laid out row-major. Draws exactly k * r1 bits.
SignMatrix build_kwise_factor(std::size_t rows, std::size_t cols, unsigned k, BitSource& bits);

// A2: rows are the 4-wise independent sign vectors indexed by the vertices of
// a walk of length n on the expander with side 2^(2r); vertex (x, y) is the
// seed x | y << 2r. Draws exactly 4r + 3(n - 1) bits.
SignMatrix build_walk_factor(std::size_t rows, std::size_t cols, BitSource& bits);

struct Construction {
  SignMatrix a1;
  SignMatrix a2;
  SignMatrix product;
  BuildReport report;
};

// A1 first, then A2, then A = A1 . A2. Throws std::logic_error if the bits
// drawn differ from bit_budget (an internal invariant).
Construction build_construction(std::size_t rows, std::size_t cols, unsigned k, BitSource& bits);

}  // namespace kashin
