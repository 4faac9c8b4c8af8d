#include "kashin/gf2.hpp"

#include <array>
#include <stdexcept>
#include <string>

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#define KASHIN_HAVE_PCLMUL_DISPATCH 1
#endif

namespace kashin {

namespace {

// Smallest irreducible polynomial of each degree 1..32 (leading term included).
constexpr std::array<std::uint64_t, 33> kModuli = {
    0x0,         // degree 0 unused
    0x3,         0x7,        0xb,        0x13,       0x25,       0x43,
    0x83,        0x11b,      0x203,      0x409,      0x805,      0x1009,
    0x201b,      0x4021,     0x8003,     0x1002b,    0x20009,    0x40009,
    0x80027,     0x100009,   0x200005,   0x400003,   0x800021,   0x100001b,
    0x2000009,   0x400001b,  0x8000027,  0x10000003, 0x20000005, 0x40000003,
    0x80000009,  0x10000008d,
};

std::uint64_t clmul32_portable(std::uint32_t a, std::uint32_t b) {
  // 4-bit window: table[w] = a * w
  std::array<std::uint64_t, 16> table{};
  const std::uint64_t wide = a;
  table[1] = wide;
  for (unsigned w = 2; w < 16; w += 2) {
    table[w] = table[w / 2] << 1;
    table[w + 1] = table[w] ^ wide;
  }
  std::uint64_t result = 0;
  for (int shift = 28; shift >= 0; shift -= 4) {
    result = (result << 4) ^ table[(b >> shift) & 0xF];
  }
  return result;
}

#ifdef KASHIN_HAVE_PCLMUL_DISPATCH
__attribute__((target("pclmul,sse2"))) std::uint64_t clmul32_hw(std::uint32_t a,
                                                                 std::uint32_t b) {
  const __m128i x = _mm_cvtsi64_si128(static_cast<long long>(a));
  const __m128i y = _mm_cvtsi64_si128(static_cast<long long>(b));
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_clmulepi64_si128(x, y, 0x00)));
}

const bool kHasPclmul = __builtin_cpu_supports("pclmul");
#endif

}  // namespace

std::uint64_t irreducible_modulus(unsigned degree) {
  if (degree < kMinFieldDegree || degree > kMaxFieldDegree) {
    throw std::invalid_argument("field degree " + std::to_string(degree) +
                                " outside supported range [1, 32]");
  }
  return kModuli[degree];
}

std::uint64_t clmul32(std::uint32_t a, std::uint32_t b) {
#ifdef KASHIN_HAVE_PCLMUL_DISPATCH
  if (kHasPclmul) return clmul32_hw(a, b);
#endif
  return clmul32_portable(a, b);
}

GaloisField::GaloisField(unsigned degree)
    : degree_(degree),
      modulus_(irreducible_modulus(degree)),
      mask_((std::uint64_t{1} << degree) - 1),
      tail_(static_cast<std::uint32_t>(modulus_ & mask_)) {}

FieldElement GaloisField::pow(FieldElement a, std::uint64_t exponent) const {
  FieldElement result{1};
  FieldElement base = a;
  while (exponent) {
    if (exponent & 1) result = mul(result, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return result;
}

FieldElement GaloisField::inverse(FieldElement a) const {
  if (a.value == 0) throw std::domain_error("zero has no multiplicative inverse");
  // a^(2^r - 2) = a^-1 in the multiplicative group of order 2^r - 1
  return pow(a, order() - 2);
}

FieldElement gf_mul(FieldElement a, FieldElement b, unsigned degree) {
  const GaloisField field(degree);
  if (!field.contains(a) || !field.contains(b)) {
    throw std::invalid_argument("operand outside GF(2^" + std::to_string(degree) + ")");
  }
  return field.mul(a, b);
}

FieldAxiomReport verify_field_axioms(unsigned degree) {
  const GaloisField field(degree);
  const auto q = static_cast<std::uint32_t>(field.order());
  FieldAxiomReport report;
  report.degree = degree;
  const auto expect = [&](bool ok) {
    ++report.checks;
    if (!ok) ++report.violations;
  };
  for (std::uint32_t a = 0; a < q; ++a) {
    const FieldElement fa{a};
    expect(field.mul(fa, FieldElement{1}) == fa);
    expect(field.mul(fa, FieldElement{0}) == FieldElement{0});
    if (a != 0) expect(field.mul(fa, field.inverse(fa)) == FieldElement{1});
    for (std::uint32_t b = 0; b < q; ++b) {
      const FieldElement fb{b};
      const FieldElement ab = field.mul(fa, fb);
      expect(field.contains(ab));
      expect(ab == field.mul(fb, fa));
      // no zero divisors
      if (a != 0 && b != 0) expect(ab.value != 0);
      for (std::uint32_t c = 0; c < q; ++c) {
        const FieldElement fc{c};
        expect(field.mul(ab, fc) == field.mul(fa, field.mul(fb, fc)));
        expect(field.mul(fa, GaloisField::add(fb, fc)) ==
               GaloisField::add(ab, field.mul(fa, fc)));
      }
    }
  }
  return report;
}

}  // namespace kashin
