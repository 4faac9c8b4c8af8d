#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kashin {

using SeedBytes = std::vector<std::uint8_t>;

// Parses a hex string (odd lengths are left-padded with '0'). Throws
// std::invalid_argument on empty input or non-hex characters.
SeedBytes parse_hex_seed(std::string_view hex);
std::string to_hex(std::span<const std::uint8_t> bytes);

// Stream seed for (master, label, counter). Distinct labels and counters give
// independent streams; the construction bit budget is never charged for them.
SeedBytes derive_seed(std::span<const std::uint8_t> master, std::string_view label,
                      std::uint64_t counter);

// Expands arbitrary seed bytes through std::seed_seq, whose output is fixed by
// the standard, so streams agree across platforms.
std::seed_seq make_seed_seq(std::span<const std::uint8_t> bytes);

// Monte-Carlo randomness for the verification suites. Only mt19937_64 raw
// output is used; the transforms below are spelled out so the streams do not
// depend on a standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::span<const std::uint8_t> seed);

  std::uint64_t next() { return engine_(); }
  bool coin() { return (next() >> 63) != 0; }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform integer on [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Uniformly random unit vector in R^dim.
std::vector<double> random_unit_vector(Rng& rng, std::size_t dim);

}  // namespace kashin
