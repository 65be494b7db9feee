#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcorr/measures.hpp"

namespace qcorr {

/// Deliberate corruption of one closed-form result, for negative-control
/// tests of the oracle suite. Never set outside tests.
enum class OracleFault { None, CoefficientMap, Spectrum, AnalyticDiscord, Completeness };

std::string_view to_string(OracleFault fault) noexcept;
OracleFault parse_oracle_fault(std::string_view text);

struct OracleOptions {
  std::uint64_t seed = 20240601;
  std::size_t n_states = 1000;
  std::size_t completeness_points = 101;
  NumericDiscordOptions numeric;
  OracleFault fault = OracleFault::None;
};

struct OracleCheck {
  std::string name;
  std::size_t samples = 0;
  double max_deviation = 0.0;
  double median_deviation = 0.0;
  double max_tolerance = 0.0;
  /// Negative when the check has no median bound.
  double median_tolerance = -1.0;
  bool passed = false;
};

/// A single comparison whose deviation exceeded 1e-6.
struct OracleDiscrepancy {
  std::string check;
  std::size_t index = 0;
  double deviation = 0.0;
};

struct OracleReport {
  OracleOptions options;
  std::vector<OracleCheck> checks;
  std::vector<OracleDiscrepancy> discrepancies;

  bool passed() const noexcept;
};

/// Cross-checks the closed forms against independent computations on
/// seeded random X states:
///   coefficient-map      c1..c4 maps vs Kraus sum, BF/PF/BPF x p = 0.1..0.9
///   spectrum             closed-form eigenvalues vs dense diagonalization
///   discord              analytic vs brute-force measurement minimization
///   discord-envelope     numeric - analytic, must stay below 1e-9
///   completeness         sum E^dagger E - I over a p grid, every channel
///   pure-state           |C - I/2| and |Q - I/2| on pure X states
/// Deterministic for a given seed regardless of thread count.
OracleReport run_oracle_suite(const OracleOptions& options = {});

}  // namespace qcorr
