#include "qcorr/channels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <string>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {

using cd = std::complex<double>;

Matrix4c kron(const Matrix2c& lhs, const Matrix2c& rhs) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = lhs(i, j) * rhs;
  return out;
}

}  // namespace

std::string_view to_string(ChannelKind kind) noexcept {
  switch (kind) {
    case ChannelKind::AD: return "AD";
    case ChannelKind::PF: return "PF";
    case ChannelKind::BF: return "BF";
    case ChannelKind::BPF: return "BPF";
  }
  return "unknown";
}

ChannelKind parse_channel_kind(std::string_view text) {
  std::string key(text);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (key == "ad") return ChannelKind::AD;
  if (key == "pf") return ChannelKind::PF;
  if (key == "bf") return ChannelKind::BF;
  if (key == "bpf") return ChannelKind::BPF;
  throw Error(ErrorKind::Validation, "unknown channel '" + std::string(text) + "'");
}

ParametrizedTime::ParametrizedTime(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::Validation,
                "parametrized time p = " + std::to_string(p) +
                    " outside [0, 1]");
  }
}

ParametrizedTime ParametrizedTime::from_decay(double theta, double t) {
  if (!(theta >= 0.0) || !(t >= 0.0)) {
    throw Error(ErrorKind::Validation, "decay rate and time must be >= 0");
  }
  return ParametrizedTime(-std::expm1(-theta * t));
}

KrausSet kraus_ops(ChannelKind kind, ParametrizedTime time) {
  const double p = time.value();
  Matrix2c e0 = Matrix2c::Zero();
  Matrix2c e1 = Matrix2c::Zero();
  if (kind == ChannelKind::AD) {
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(1.0 - p);
    e1(0, 1) = std::sqrt(p);
    return {e0, e1};
  }

  const double keep = std::sqrt(1.0 - 0.5 * p);
  const double flip = std::sqrt(0.5 * p);
  e0(0, 0) = e0(1, 1) = keep;
  switch (kind) {
    case ChannelKind::BF:
      e1(0, 1) = e1(1, 0) = flip;
      break;
    case ChannelKind::PF:
      e1(0, 0) = flip;
      e1(1, 1) = -flip;
      break;
    case ChannelKind::BPF:
      e1(0, 1) = cd(0.0, -flip);
      e1(1, 0) = cd(0.0, flip);
      break;
    case ChannelKind::AD:
      break;
  }
  return {e0, e1};
}

double completeness_deviation(const KrausSet& ops) {
  Matrix2c sum = Matrix2c::Zero();
  for (const Matrix2c& e : ops) sum += e.adjoint() * e;
  return (sum - Matrix2c::Identity()).cwiseAbs().maxCoeff();
}

Matrix4c apply_local_channel(const Matrix4c& rho, ChannelKind kind,
                             ParametrizedTime p) {
  const KrausSet ops = kraus_ops(kind, p);
  Matrix4c out = Matrix4c::Zero();
  for (const Matrix2c& mu : ops) {
    for (const Matrix2c& nu : ops) {
      const Matrix4c e = kron(mu, nu);
      out.noalias() += e * rho * e.adjoint();
    }
  }
  return out;
}

XState evolve_two_qubit(const XState& x, ChannelKind kind, ParametrizedTime p) {
  return from_matrix(apply_local_channel(to_matrix(x), kind, p), 1e-13);
}

CorrelationCoefficients evolve_coefficients(const CorrelationCoefficients& c,
                                            ChannelKind kind,
                                            ParametrizedTime time) {
  const double q = 1.0 - time.value();
  const double q2 = q * q;
  switch (kind) {
    case ChannelKind::BPF:
      return {c.c1 * q2, c.c2, c.c3 * q2, c.c4 * q};
    case ChannelKind::BF:
      return {c.c1, c.c2 * q2, c.c3 * q2, c.c4 * q};
    case ChannelKind::PF:
      return {c.c1 * q2, c.c2 * q2, c.c3, c.c4};
    case ChannelKind::AD:
      break;
  }
  throw Error(ErrorKind::UnsupportedChannel,
              "amplitude damping has no closed-form coefficient map");
}

}  // namespace qcorr
