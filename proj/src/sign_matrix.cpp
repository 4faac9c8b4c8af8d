#include "kashin/sign_matrix.hpp"

#include <stdexcept>
#include <string>

namespace kashin {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::a1: return "A1";
    case Provenance::a2: return "A2";
    case Provenance::product: return "product";
    case Provenance::external: return "external";
  }
  return "external";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "A1") return Provenance::a1;
  if (name == "A2") return Provenance::a2;
  if (name == "product") return Provenance::product;
  if (name == "external") return Provenance::external;
  throw std::invalid_argument("unknown provenance tag: " + std::string(name));
}

SignMatrix::SignMatrix(std::size_t rows, std::size_t cols, Provenance provenance)
    : rows_(rows),
      cols_(cols),
      stride_((cols + 63) / 64),
      provenance_(provenance),
      bits_(rows * stride_, 0) {}

void SignMatrix::set(std::size_t i, std::size_t j, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign matrix entries must be +1 or -1");
  set_negative(i, j, sign < 0);
}

SignMatrix hadamard(const SignMatrix& a, const SignMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hadamard: shape mismatch " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
  }
  SignMatrix out(a.rows(), a.cols(), Provenance::product);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ra = a.row_words(i);
    const auto rb = b.row_words(i);
    auto ro = out.row_words(i);
    // (-1)^p * (-1)^q = (-1)^(p xor q)
    for (std::size_t w = 0; w < ra.size(); ++w) ro[w] = ra[w] ^ rb[w];
  }
  return out;
}

}  // namespace kashin
