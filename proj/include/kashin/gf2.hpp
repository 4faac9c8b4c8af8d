#pragma once

#include <cstdint>
#include <compare>

namespace kashin {

// Element of GF(2^r): the bits of `value` are the coefficients of a
// polynomial over GF(2), reduced modulo the field's irreducible polynomial.
struct FieldElement {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

inline constexpr unsigned kMinFieldDegree = 1;
inline constexpr unsigned kMaxFieldDegree = 32;

// Fixed modulus for GF(2^degree), including the x^degree term. The table
// holds the numerically smallest irreducible polynomial of each degree.
// Throws std::invalid_argument for degree outside [1, 32].
std::uint64_t irreducible_modulus(unsigned degree);

// Carry-less (GF(2)[x]) product of two 32-bit polynomials.
std::uint64_t clmul32(std::uint32_t a, std::uint32_t b);

class GaloisField {
 public:
  explicit GaloisField(unsigned degree);

  unsigned degree() const { return degree_; }
  std::uint64_t modulus() const { return modulus_; }
  // Number of elements, 2^degree.
  std::uint64_t order() const { return std::uint64_t{1} << degree_; }

  bool contains(FieldElement a) const {
    return (std::uint64_t{a.value} >> degree_) == 0;
  }

  static constexpr FieldElement add(FieldElement a, FieldElement b) {
    return FieldElement{a.value ^ b.value};
  }

  FieldElement mul(FieldElement a, FieldElement b) const {
    return reduce(clmul32(a.value, b.value));
  }

  FieldElement pow(FieldElement a, std::uint64_t exponent) const;

  // Throws std::domain_error for zero.
  FieldElement inverse(FieldElement a) const;

  // Reduces a polynomial of degree < 2*degree() modulo the field polynomial.
  FieldElement reduce(std::uint64_t product) const {
    while (product >> degree_) {
      const std::uint64_t high = product >> degree_;
      product = (product & mask_) ^ clmul32(static_cast<std::uint32_t>(high), tail_);
    }
    return FieldElement{static_cast<std::uint32_t>(product)};
  }

 private:
  unsigned degree_;
  std::uint64_t modulus_;
  std::uint64_t mask_;
  // modulus without its leading term; x^degree == tail_ in the field
  std::uint32_t tail_;
};

// Product in GF(2^degree) under the fixed modulus.
FieldElement gf_mul(FieldElement a, FieldElement b, unsigned degree);

struct FieldAxiomReport {
  unsigned degree = 0;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
};

// Exhaustive check of the ring and field axioms over all elements (all
// triples for associativity and distributivity). Meant for degree <= 8.
FieldAxiomReport verify_field_axioms(unsigned degree);

}  // namespace kashin
