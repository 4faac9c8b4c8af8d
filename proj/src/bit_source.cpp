#include "kashin/bit_source.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace kashin {

BitSource BitSource::deterministic(SeedBytes seed) {
  BitSource source;
  source.mode_ = BitMode::deterministic;
  source.seed_ = std::move(seed);
  auto seq = make_seed_seq(source.seed_);
  source.engine_.seed(seq);
  return source;
}

BitSource BitSource::os_entropy() {
  BitSource source;
  source.mode_ = BitMode::os_entropy;
  source.device_ = std::make_shared<std::random_device>();
  return source;
}

BitSource BitSource::recorded(std::vector<bool> bits) {
  BitSource source;
  source.mode_ = BitMode::recorded;
  source.budget_ = bits.size();
  source.recorded_ = std::move(bits);
  return source;
}

std::optional<std::uint64_t> BitSource::remaining() const {
  if (!budget_) return std::nullopt;
  return *budget_ > consumed_ ? *budget_ - consumed_ : 0;
}

std::uint64_t BitSource::next_word() {
  switch (mode_) {
    case BitMode::deterministic:
      return engine_();
    case BitMode::os_entropy: {
      const std::uint64_t lo = (*device_)();
      const std::uint64_t hi = (*device_)();
      return (hi << 32) | (lo & 0xFFFFFFFFu);
    }
    case BitMode::recorded:
      break;
  }
  return 0;
}

bool BitSource::bit() {
  if (budget_ && consumed_ >= *budget_) {
    throw BitSourceExhausted("bit source exhausted after " + std::to_string(consumed_) +
                             " bits");
  }
  bool value;
  if (mode_ == BitMode::recorded) {
    value = recorded_[consumed_];
  } else {
    if (word_bits_left_ == 0) {
      word_ = next_word();
      word_bits_left_ = 64;
    }
    value = (word_ & 1) != 0;
    word_ >>= 1;
    --word_bits_left_;
  }
  ++consumed_;
  return value;
}

std::uint64_t BitSource::take(unsigned count) {
  if (count > 64) throw std::invalid_argument("BitSource::take: at most 64 bits per draw");
  if (budget_ && *budget_ - std::min(*budget_, consumed_) < count) {
    throw BitSourceExhausted("bit source exhausted: requested " + std::to_string(count) +
                             " bits with " + std::to_string(*remaining()) + " left");
  }
  std::uint64_t out = 0;
  for (unsigned i = 0; i < count; ++i) {
    if (bit()) out |= std::uint64_t{1} << i;
  }
  return out;
}

}  // namespace kashin
