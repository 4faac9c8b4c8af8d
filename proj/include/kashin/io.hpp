#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "kashin/builder.hpp"
#include "kashin/expander.hpp"
#include "kashin/kwise.hpp"
#include "kashin/linalg.hpp"
#include "kashin/sign_matrix.hpp"
#include "kashin/verify.hpp"

namespace kashin {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// SGNM text format:
//   SGNM <n> <N> <provenance> <seed-hex>
//   n lines of N characters from {+, -}
void write_sgnm(std::ostream& out, const SignMatrix& m, std::string_view seed_hex);

struct SgnmFile {
  SignMatrix matrix;
  std::string seed_hex;
};
SgnmFile read_sgnm(std::istream& in);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

nlohmann::json to_json(const BuildReport& r);
BuildReport build_report_from_json(const nlohmann::json& j);

// {"N", "dim", "rank", "seed", "vectors": [[...], ...]}
nlohmann::json to_json(const KernelBasis& basis, std::string_view seed_hex);
KernelBasis kernel_from_json(const nlohmann::json& j);

// "# N=<N> dim=<dim> rank=<rank> seed=<hex>" then one comma-separated row per vector.
void write_kernel_csv(std::ostream& out, const KernelBasis& basis, std::string_view seed_hex);
KernelBasis read_kernel_csv(std::istream& in);

nlohmann::json to_json(const KwiseReport& r);
nlohmann::json to_json(const LambdaEstimate& r);
nlohmann::json to_json(const TailReport& r);
nlohmann::json to_json(const PaleyZygmundReport& r);
nlohmann::json to_json(const SingleVectorReport& r);
// The witness vector is included only when include_witness is set.
nlohmann::json to_json(const DistortionReport& r, bool include_witness = true);

// t, threshold, exceed_count, frequency, bound, flagged
void write_tail_csv(std::ostream& out, const TailReport& r);

}  // namespace kashin
