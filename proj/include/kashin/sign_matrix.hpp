#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace kashin {

enum class Provenance { a1, a2, product, external };

std::string_view provenance_name(Provenance p);
// Inverse of provenance_name; throws std::invalid_argument.
Provenance parse_provenance(std::string_view name);

// Dense rows x cols matrix with entries in {-1, +1}, stored one bit per entry
// (set bit = -1). Padding bits past `cols` in each row are always zero.
class SignMatrix {
 public:
  SignMatrix() = default;
  // All entries +1.
  SignMatrix(std::size_t rows, std::size_t cols, Provenance provenance);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }

  bool negative(std::size_t i, std::size_t j) const {
    return (bits_[i * stride_ + j / 64] >> (j % 64)) & 1u;
  }
  int at(std::size_t i, std::size_t j) const { return negative(i, j) ? -1 : 1; }

  void set_negative(std::size_t i, std::size_t j, bool neg) {
    auto& word = bits_[i * stride_ + j / 64];
    const std::uint64_t mask = std::uint64_t{1} << (j % 64);
    word = neg ? (word | mask) : (word & ~mask);
  }
  // Throws std::invalid_argument unless sign is +1 or -1.
  void set(std::size_t i, std::size_t j, int sign);

  std::size_t words_per_row() const { return stride_; }
  std::span<const std::uint64_t> row_words(std::size_t i) const {
    return {bits_.data() + i * stride_, stride_};
  }
  std::span<std::uint64_t> row_words(std::size_t i) {
    return {bits_.data() + i * stride_, stride_};
  }

  // Equal shape and entries; provenance is not compared.
  bool same_entries(const SignMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  Provenance provenance_ = Provenance::external;
  std::vector<std::uint64_t> bits_;
};

// Entrywise product; throws std::invalid_argument on shape mismatch.
SignMatrix hadamard(const SignMatrix& a, const SignMatrix& b);

}  // namespace kashin
