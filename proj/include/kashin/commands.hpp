#pragma once

#include <iosfwd>

namespace kashin {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // bad flags, invalid config, I/O failure
inline constexpr int kExitCertification = 2;

// Entry point of the `kashin` tool: generate, verify, spectrum.
// Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kashin
