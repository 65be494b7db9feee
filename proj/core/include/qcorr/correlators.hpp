#pragma once

#include <string_view>

#include "qcorr/quadrature.hpp"

namespace qcorr {

enum class ModelKind { XY, TIM, XXZ, External };

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts "xy", "tim", "xxz" and "external" (case-insensitive).
ModelKind parse_model_kind(std::string_view text);

/// Largest spin separation for which Toeplitz correlators are evaluated.
inline constexpr int kMaxSeparation = 16;

/// A spin model together with its tuning parameters and the separation of
/// the two spins whose reduced state is examined.
///
/// lambda is the inverse transverse-field strength, gamma the XY anisotropy
/// and delta the XXZ zz-anisotropy. XY and TIM points ignore delta; XXZ and
/// External points ignore lambda and gamma.
struct ModelPoint {
  ModelKind kind = ModelKind::XY;
  double lambda = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  int r = 1;

  static ModelPoint xy(double lambda, double gamma, int r = 1);
  /// Transverse-field Ising point; gamma is forced to +1 or -1.
  static ModelPoint tim(double lambda, int r = 1, double gamma_sign = 1.0);
  static ModelPoint xxz(double delta, int r = 1);
  static ModelPoint external(int r = 1);

  void validate() const;
};

/// Ground-state magnetization and two-site correlators at one model point.
/// mz is the single-site <sigma^z>; sxx, syy, szz are
/// <sigma^a_i sigma^a_{i+r}>.
struct CorrelatorSet {
  double mz = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double szz = 0.0;

  /// Throws Error{RangeError} naming the first entry outside [-1, 1].
  void validate() const;
};

/// Quasiparticle energy omega_phi of the transverse-field XY chain.
double dispersion(double phi, double lambda, double gamma) noexcept;

/// <sigma^z> in the thermodynamic limit; equals -1 at lambda = 0.
double magnetization(double lambda, double gamma,
                     const QuadratureConfig& quad = {});

/// Toeplitz generator G_r for any integer r (negative r allowed).
double g_coefficient(int r, double lambda, double gamma,
                     const QuadratureConfig& quad = {});

/// Exact correlators of the XY / TIM chain from Toeplitz determinants.
///
/// Throws Error{UnsupportedModel} for XXZ and External points (those are
/// ingested from tables) and Error{SizeLimit} when r > kMaxSeparation.
CorrelatorSet correlator_set(const ModelPoint& point,
                             const QuadratureConfig& quad = {});

}  // namespace qcorr
