#include "qcorr/xstate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {

std::array<double, 4> raw_spectrum(const CorrelationCoefficients& c) noexcept {
  const double root = std::sqrt(4.0 * c.c4 * c.c4 + (c.c1 - c.c2) * (c.c1 - c.c2));
  return {0.25 * ((1.0 + c.c3) + root), 0.25 * ((1.0 + c.c3) - root),
          0.25 * (1.0 - c.c3 + c.c1 + c.c2), 0.25 * (1.0 - c.c3 - c.c1 - c.c2)};
}

// Returns an empty string for a valid state, otherwise the reason.
std::string check_state(const XState& x) {
  std::ostringstream why;
  if (!(std::abs(x.trace() - 1.0) <= kStateTolerance)) {
    why << "trace " << x.trace() << " != 1";
  } else if (!(x.a >= -kStateTolerance && x.b >= -kStateTolerance &&
               x.d >= -kStateTolerance)) {
    why << "negative diagonal entry (a=" << x.a << ", b=" << x.b
        << ", d=" << x.d << ")";
  } else if (!(std::abs(x.z) <= x.b + kStateTolerance)) {
    why << "|z| = " << std::abs(x.z) << " exceeds b = " << x.b;
  } else if (!(std::abs(x.f) <=
               std::sqrt(std::max(x.a * x.d, 0.0)) + kStateTolerance)) {
    why << "|f| = " << std::abs(x.f) << " exceeds sqrt(a d)";
  } else {
    const auto spectrum = raw_spectrum(coefficients(x));
    const double smallest = *std::min_element(spectrum.begin(), spectrum.end());
    if (!(smallest >= -kStateTolerance)) {
      why << "eigenvalue " << smallest << " < 0";
    }
  }
  return why.str();
}

}  // namespace

bool XState::is_valid() const noexcept { return check_state(*this).empty(); }

void XState::validate() const {
  const std::string why = check_state(*this);
  if (!why.empty()) {
    throw Error(ErrorKind::InvalidState, "invalid X state: " + why);
  }
}

XState from_correlators(const CorrelatorSet& c) {
  XState x;
  x.a = 0.25 + 0.5 * c.mz + 0.25 * c.szz;
  x.d = 0.25 - 0.5 * c.mz + 0.25 * c.szz;
  x.b = 0.25 * (1.0 - c.szz);
  x.z = 0.25 * (c.sxx + c.syy);
  x.f = 0.25 * (c.sxx - c.syy);
  x.validate();
  return x;
}

Spectrum eigenvalues(const XState& x) {
  Spectrum out;
  out.values = raw_spectrum(coefficients(x));
  for (double& v : out.values) v = std::clamp(v, 0.0, 1.0);
  return out;
}

std::array<double, 4> dense_eigenvalues(const XState& x) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(to_matrix(x),
                                                 Eigen::EigenvaluesOnly);
  const Eigen::Vector4d& ev = solver.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3)};
}

CorrelationCoefficients coefficients(const XState& x) noexcept {
  return {2.0 * x.z + 2.0 * x.f, 2.0 * x.z - 2.0 * x.f, x.a + x.d - 2.0 * x.b,
          x.a - x.d};
}

XState from_coefficients(const CorrelationCoefficients& c) {
  // a + d = (1 + c3) / 2 and b = (1 - c3) / 4 follow from unit trace.
  XState x;
  x.a = 0.25 * (1.0 + c.c3) + 0.5 * c.c4;
  x.d = 0.25 * (1.0 + c.c3) - 0.5 * c.c4;
  x.b = 0.25 * (1.0 - c.c3);
  x.z = 0.25 * (c.c1 + c.c2);
  x.f = 0.25 * (c.c1 - c.c2);
  x.validate();
  return x;
}

Matrix4c to_matrix(const XState& x) {
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = x.a;
  m(1, 1) = x.b;
  m(2, 2) = x.b;
  m(3, 3) = x.d;
  m(1, 2) = m(2, 1) = x.z;
  m(0, 3) = m(3, 0) = x.f;
  return m;
}

XState from_matrix(const Matrix4c& rho, double tolerance) {
  static constexpr bool kInPattern[4][4] = {{true, false, false, true},
                                            {false, true, true, false},
                                            {false, true, true, false},
                                            {true, false, false, true}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const auto v = rho(i, j);
      const double off = kInPattern[i][j] ? std::abs(v.imag()) : std::abs(v);
      if (off > tolerance) {
        std::ostringstream msg;
        msg << "entry (" << i << ',' << j << ") = " << v
            << " breaks the real X pattern";
        throw Error(ErrorKind::PatternViolation, msg.str());
      }
    }
  }
  if (std::abs(rho(1, 1).real() - rho(2, 2).real()) > tolerance ||
      std::abs(rho(1, 2).real() - rho(2, 1).real()) > tolerance ||
      std::abs(rho(0, 3).real() - rho(3, 0).real()) > tolerance) {
    throw Error(ErrorKind::PatternViolation,
                "matrix is not a symmetric X state (b or anti-diagonal mismatch)");
  }
  XState x;
  x.a = rho(0, 0).real();
  x.b = 0.5 * (rho(1, 1).real() + rho(2, 2).real());
  x.d = rho(3, 3).real();
  x.z = 0.5 * (rho(1, 2).real() + rho(2, 1).real());
  x.f = 0.5 * (rho(0, 3).real() + rho(3, 0).real());
  return x;
}

XState random_xstate(std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double w[4];
  double total = 0.0;
  for (double& v : w) {
    v = exp1(rng);
    total += v;
  }
  XState x;
  x.a = w[0] / total;
  x.b = 0.5 * (w[1] + w[2]) / total;
  x.d = w[3] / total;
  // Force exact unit trace after normalization rounding.
  x.d = 1.0 - x.a - 2.0 * x.b;
  if (x.d < 0.0) x.d = 0.0;
  x.z = unit(rng) * x.b;
  x.f = unit(rng) * std::sqrt(x.a * x.d);
  return x;
}

}  // namespace qcorr
