#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "kashin/random.hpp"
#include "kashin/verify.hpp"

namespace kashin {

inline constexpr const char* kMatrixFile = "matrix.sgnm";
inline constexpr const char* kKernelJsonFile = "kernel.json";
inline constexpr const char* kKernelCsvFile = "kernel.csv";
inline constexpr const char* kBuildReportFile = "build_report.json";

// Acceptance tolerances for a kernel basis of an n x N sign matrix.
inline constexpr double kKernelResidualTol = 1e-8;  // times sqrt(N), max-norm of A b
inline constexpr double kOrthonormalityTol = 1e-10;

struct CertifyConfig {
  std::size_t cols = 128;
  double eta = 0.5;
  std::optional<unsigned> k;
  SeedBytes seed;
  std::uint64_t trials = 100;
  // directory written by `generate`, re-checked when set
  std::optional<std::filesystem::path> artifacts;
};

struct SuiteResult {
  std::string name;
  std::string status;  // "pass", "fail" or "skipped"
  // gating suites check exact statements; a failure there is a bug or a
  // corrupted artifact and makes the run fail
  bool gating = true;
  nlohmann::json details;
};

struct CertifyResult {
  std::vector<SuiteResult> suites;
  bool gating_failure = false;
  nlohmann::json report;
  std::optional<TailReport> tail;  // set when the tail suite ran
};

// Runs every certification suite at the configured size. Contains no
// timings, so equal configs give byte-identical reports.
CertifyResult run_certification(const CertifyConfig& config);

// Re-checks a `generate` output directory: kernel residual against the stored
// matrix, orthonormality, dimension, and regeneration from the recorded seed.
SuiteResult check_artifacts(const std::filesystem::path& dir);

}  // namespace kashin
