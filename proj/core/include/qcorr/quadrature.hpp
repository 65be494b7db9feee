#pragma once

#include <cstddef>
#include <functional>

namespace qcorr {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 20;

  /// Throws Error{Validation} unless both tolerances are positive and at
  /// least one subdivision is allowed.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Globally adaptive Gauss-Kronrod integration on [lo, hi].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|). Throws
/// Error{QuadratureFailure} if the panel budget runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, const QuadratureConfig& config = {});

}  // namespace qcorr
