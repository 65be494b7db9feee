#pragma once

#include <span>
#include <string_view>

#include "qcorr/xstate.hpp"

namespace qcorr {

/// Total, classical and quantum correlations in bits. By construction
/// mutual = classical + discord.
struct CorrelationTriple {
  double mutual = 0.0;
  double classical = 0.0;
  double discord = 0.0;
};

/// Which closed-form candidate attains the discord minimum: Q1 is the
/// sigma^z measurement on B, Q2 the best measurement in the xy plane.
enum class DiscordBranch { Q1, Q2 };

/// Optimal measurement direction behind the analytic discord. Q1 always maps
/// to Z; Q2 resolves to X when |c1| >= |c2| and to Y otherwise.
enum class MeasurementAxis { Z, X, Y };

std::string_view to_string(DiscordBranch branch) noexcept;
std::string_view to_string(MeasurementAxis axis) noexcept;

/// Bloch direction n = (sin t cos p, sin t sin p, cos t) of the projectors
/// (I +- n.sigma) / 2 applied to qubit B.
struct MeasurementBasis {
  double theta = 0.0;
  double phi = 0.0;
};

struct AnalyticDiscord {
  double discord = 0.0;
  DiscordBranch branch = DiscordBranch::Q2;
  MeasurementAxis axis = MeasurementAxis::X;
  double q1 = 0.0;
  double q2 = 0.0;
  /// Discord candidates for measurements along x and along y. Their minimum
  /// equals q2.
  double q2_x = 0.0;
  double q2_y = 0.0;
};

/// Shannon entropy -sum p log2 p with 0 log 0 = 0. Entries in [-1e-12, 0)
/// count as zero; anything more negative throws
/// Error{NegativeProbability}.
double entropy_bits(std::span<const double> probabilities);

/// S(rho_A) = S(rho_B); both marginals are fixed by c4.
double marginal_entropy(const XState& x);
double joint_entropy(const XState& x);
double mutual_information(const XState& x);

/// min{Q1, Q2} from the closed-form X-state expressions. Ties within 1e-12
/// report Q2.
AnalyticDiscord discord_analytic(const XState& x);

/// sum_i p_i S(rho_A|i) after a projective measurement of qubit B. Outcomes
/// with zero probability contribute nothing.
double conditional_entropy_measured(const XState& x, const MeasurementBasis& m);

struct NumericDiscordOptions {
  int theta_points = 181;  // over [0, pi]
  int phi_points = 91;     // over [0, pi/2]
  bool refine = true;
  double refine_tolerance = 1e-10;
};

struct NumericDiscord {
  double discord = 0.0;
  double conditional_entropy = 0.0;
  MeasurementBasis basis;
};

/// Brute-force discord: grid search over measurement directions followed by
/// a Nelder-Mead polish of the best cell.
///
/// The phi range is [0, pi/2] because for a real X state the conditional
/// entropy depends on phi only through cos^2 and sin^2. Ties on the grid go
/// to the smallest theta, then the smallest phi. Entropies of rho_B and
/// rho_AB come from explicit partial traces and dense diagonalization, so
/// no closed-form expression is shared with discord_analytic.
NumericDiscord discord_numeric(const XState& x,
                               const NumericDiscordOptions& options = {});

enum class DiscordMethod { Analytic, Numeric };

CorrelationTriple triple(const XState& x,
                         DiscordMethod method = DiscordMethod::Analytic);

}  // namespace qcorr
