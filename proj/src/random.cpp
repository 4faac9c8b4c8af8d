#include "kashin/random.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kashin {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::vector<std::uint32_t> pack_words(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint32_t> words((bytes.size() + 3) / 4 + 1, 0);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    words[i / 4] |= std::uint32_t{bytes[i]} << (8 * (i % 4));
  }
  // length word keeps "00" and "0000" apart
  words.back() = static_cast<std::uint32_t>(bytes.size());
  return words;
}

}  // namespace

SeedBytes parse_hex_seed(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty()) throw std::invalid_argument("empty hex seed");
  std::string padded = (hex.size() % 2) ? "0" + std::string(hex) : std::string(hex);
  SeedBytes out;
  out.reserve(padded.size() / 2);
  for (std::size_t i = 0; i < padded.size(); i += 2) {
    const int hi = hex_digit(padded[i]);
    const int lo = hex_digit(padded[i + 1]);
    if (hi < 0 || lo < 0) {
      throw std::invalid_argument("seed is not hexadecimal: " + std::string(hex));
    }
    out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::seed_seq make_seed_seq(std::span<const std::uint8_t> bytes) {
  const auto words = pack_words(bytes);
  return std::seed_seq(words.begin(), words.end());
}

SeedBytes derive_seed(std::span<const std::uint8_t> master, std::string_view label,
                      std::uint64_t counter) {
  std::vector<std::uint32_t> words = pack_words(master);
  const std::vector<std::uint8_t> label_bytes(label.begin(), label.end());
  const auto label_words = pack_words(label_bytes);
  words.insert(words.end(), label_words.begin(), label_words.end());
  words.push_back(static_cast<std::uint32_t>(counter));
  words.push_back(static_cast<std::uint32_t>(counter >> 32));
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 4> out{};
  seq.generate(out.begin(), out.end());
  SeedBytes bytes;
  bytes.reserve(16);
  for (const auto w : out) {
    for (int shift = 0; shift < 32; shift += 8) {
      bytes.push_back(static_cast<std::uint8_t>(w >> shift));
    }
  }
  return bytes;
}

Rng::Rng(std::span<const std::uint8_t> seed) {
  auto seq = make_seed_seq(seed);
  engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
  // rejection keeps the result exactly uniform
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t draw;
  do {
    draw = next();
  } while (draw >= limit);
  return draw % bound;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 == 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<double> random_unit_vector(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : v) x *= inv;
  return v;
}

}  // namespace kashin
