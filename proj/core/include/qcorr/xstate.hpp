#pragma once

#include <Eigen/Core>

#include <array>
#include <random>

#include "qcorr/correlators.hpp"

namespace qcorr {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

/// Tolerance used for the trace and positivity checks on X states.
inline constexpr double kStateTolerance = 1e-12;

/// Correlation coefficients c1..c4 of an X state.
///
/// c1 = 2z + 2f and c2 = 2z - 2f are the xx and yy correlations, c3 the zz
/// correlation and c4 the local z polarization shared by both qubits.
struct CorrelationCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

/// Eigenvalues of an X state, clamped to [0, 1].
struct Spectrum {
  std::array<double, 4> values{};

  double sum() const noexcept {
    return values[0] + values[1] + values[2] + values[3];
  }
};

/// Two-qubit X state with real anti-diagonal, in the basis {00, 01, 10, 11}:
///
///     | a 0 0 f |
///     | 0 b z 0 |
///     | 0 z b 0 |
///     | f 0 0 d |
///
/// The five parameters are the stored representation; the matrix is built
/// on demand.
struct XState {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double z = 0.0;
  double f = 0.0;

  static XState maximally_mixed() noexcept { return {0.25, 0.25, 0.25, 0.0, 0.0}; }
  /// (|00> + |11>) / sqrt(2)
  static XState bell() noexcept { return {0.5, 0.0, 0.5, 0.0, 0.5}; }

  double trace() const noexcept { return a + 2.0 * b + d; }

  /// Unit trace, element-wise positivity bounds and a non-negative spectrum,
  /// all to kStateTolerance.
  bool is_valid() const noexcept;
  /// Throws Error{InvalidState} describing the first violated condition.
  void validate() const;
};

/// Builds the reduced two-spin state from magnetization and correlators.
/// Throws Error{InvalidState} if the result is not a density matrix.
XState from_correlators(const CorrelatorSet& c);

/// Closed-form spectrum. Entries in [-kStateTolerance, 0) are clamped to 0.
Spectrum eigenvalues(const XState& x);

/// Reference spectrum from a dense Hermitian eigensolver on to_matrix(x),
/// ascending and unclamped.
std::array<double, 4> dense_eigenvalues(const XState& x);

CorrelationCoefficients coefficients(const XState& x) noexcept;
/// Inverse of coefficients(). Throws Error{InvalidState} if the coefficients
/// do not describe a density matrix.
XState from_coefficients(const CorrelationCoefficients& c);

Matrix4c to_matrix(const XState& x);

/// Reads an X state back out of a 4x4 matrix. Throws Error{PatternViolation}
/// if any entry outside the X pattern, or the imaginary part of any entry,
/// exceeds `tolerance` in magnitude, or the two middle diagonal entries
/// differ by more than `tolerance`.
XState from_matrix(const Matrix4c& rho, double tolerance = 1e-13);

/// Draws a valid X state: diagonal weights from a flat Dirichlet, then z and
/// f uniform inside their positivity bounds.
XState random_xstate(std::mt19937_64& rng);

}  // namespace qcorr
