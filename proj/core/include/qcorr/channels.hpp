#pragma once

#include <string_view>
#include <vector>

#include "qcorr/xstate.hpp"

namespace qcorr {

/// Local decoherence channels. Phase damping has the same quantum operation
/// as PF and is not listed separately.
enum class ChannelKind { AD, PF, BF, BPF };

std::string_view to_string(ChannelKind kind) noexcept;
/// Accepts "ad", "pf", "bf", "bpf" (case-insensitive).
ChannelKind parse_channel_kind(std::string_view text);

/// Parametrized time p = 1 - exp(-theta t), restricted to [0, 1].
class ParametrizedTime {
 public:
  /// Throws Error{Validation} if p is outside [0, 1].
  explicit ParametrizedTime(double p);

  /// theta is the decay rate (1/time), t >= 0 the elapsed time.
  static ParametrizedTime from_decay(double theta, double t);

  double value() const noexcept { return p_; }

 private:
  double p_;
};

using KrausSet = std::vector<Matrix2c>;

/// Single-qubit Kraus operators of a channel at parametrized time p.
KrausSet kraus_ops(ChannelKind kind, ParametrizedTime p);

/// Max-abs deviation of sum_k E_k^dagger E_k from the identity.
double completeness_deviation(const KrausSet& ops);

/// rho' = sum_{mu,nu} (E_mu x E_nu) rho (E_mu x E_nu)^dagger, with both
/// qubits coupled to identical independent environments.
Matrix4c apply_local_channel(const Matrix4c& rho, ChannelKind kind,
                             ParametrizedTime p);

/// Kraus-sum evolution of an X state. Throws Error{PatternViolation} if the
/// evolved matrix leaves the real X form by more than 1e-13.
XState evolve_two_qubit(const XState& x, ChannelKind kind, ParametrizedTime p);

/// Closed-form evolution of c1..c4 for the unital channels BF, PF and BPF.
/// Throws Error{UnsupportedChannel} for AD, which has no such map.
CorrelationCoefficients evolve_coefficients(const CorrelationCoefficients& c,
                                            ChannelKind kind,
                                            ParametrizedTime p);

/// True for channels that have a closed-form coefficient map.
constexpr bool has_coefficient_map(ChannelKind kind) noexcept {
  return kind != ChannelKind::AD;
}

}  // namespace qcorr
