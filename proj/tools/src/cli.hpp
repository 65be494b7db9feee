#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcorr::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitQuadrature = 3;
inline constexpr int kExitInsufficientData = 4;
inline constexpr int kExitOracleFailure = 5;

/// Runs the qcorr command line. args excludes the program name. Results go
/// to `out` unless --output names a file; diagnostics and the single-line
/// JSON error record go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcorr::cli
