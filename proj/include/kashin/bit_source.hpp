#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "kashin/random.hpp"

namespace kashin {

enum class BitMode {
  deterministic,  // mt19937_64 keyed by the seed bytes; replayable
  os_entropy,     // std::random_device
  recorded,       // an explicit, finite bit string
};

class BitSourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stream of raw random bits with an exact count of what has been drawn.
// Multi-bit draws are little-endian: the first bit drawn is bit 0.
class BitSource {
 public:
  static BitSource deterministic(SeedBytes seed);
  static BitSource os_entropy();
  static BitSource recorded(std::vector<bool> bits);

  BitMode mode() const { return mode_; }
  const SeedBytes& seed() const { return seed_; }
  std::uint64_t consumed() const { return consumed_; }

  // Caps the total number of bits that may ever be drawn (fixed-budget mode).
  // Recorded sources are capped at their length automatically.
  void set_budget(std::uint64_t total_bits) { budget_ = total_bits; }
  std::optional<std::uint64_t> remaining() const;

  bool bit();
  // Draws `count` <= 64 bits as an integer.
  std::uint64_t take(unsigned count);

 private:
  BitSource() = default;
  std::uint64_t next_word();

  BitMode mode_ = BitMode::deterministic;
  SeedBytes seed_;
  std::mt19937_64 engine_;
  std::shared_ptr<std::random_device> device_;
  std::vector<bool> recorded_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t word_ = 0;
  unsigned word_bits_left_ = 0;
  std::uint64_t consumed_ = 0;
};

}  // namespace kashin
