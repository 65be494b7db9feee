#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/correlator_table.hpp"
#include "qcorr/measures.hpp"

namespace qcorr {

inline constexpr double kDefaultPMax = 0.999;
inline constexpr std::size_t kDefaultPPoints = 1001;

/// n points evenly spaced on [lo, hi], both ends included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Reduced two-spin ground state of an XY / TIM model point.
XState initial_state(const ModelPoint& point, const QuadratureConfig& quad = {});

/// State after parametrized time p. BF, PF and BPF use the coefficient maps;
/// AD uses the Kraus sum.
XState evolve_state(const XState& initial, ChannelKind channel, double p);

struct Trajectory {
  ChannelKind channel = ChannelKind::PF;
  std::optional<ModelPoint> model;
  XState initial;
  std::vector<double> p_grid;
  std::vector<CorrelationTriple> triples;
  std::vector<DiscordBranch> branches;
  std::vector<MeasurementAxis> axes;
  /// Per point, the full closed-form discord record (Q1, Q2 and the x / y
  /// candidates) that fixed the branch and axis tags.
  std::vector<AnalyticDiscord> candidates;

  std::size_t size() const noexcept { return p_grid.size(); }
};

/// Correlations along a strictly increasing grid inside [0, 1).
/// Throws Error{Validation} for a bad grid and propagates invalid-state.
Trajectory trajectory(const XState& initial, ChannelKind channel,
                      std::span<const double> p_grid);
Trajectory trajectory(const ModelPoint& point, ChannelKind channel,
                      std::span<const double> p_grid,
                      const QuadratureConfig& quad = {});
Trajectory trajectory(const CorrelatorSet& correlators, ChannelKind channel,
                      std::span<const double> p_grid);

enum class DetectionMethod { BranchCrossing, SlopeChange };
std::string_view to_string(DetectionMethod method) noexcept;

struct SuddenChange {
  std::optional<double> p_sc;
  DetectionMethod method = DetectionMethod::BranchCrossing;
  /// Optimal measurement axis just before and just after p_sc, for a branch
  /// crossing.
  MeasurementAxis before = MeasurementAxis::X;
  MeasurementAxis after = MeasurementAxis::X;

  explicit operator bool() const noexcept { return p_sc.has_value(); }
};

struct SearchInterval {
  double lo = 0.0;
  double hi = kDefaultPMax;
  std::size_t samples = 2001;
};

inline constexpr double kSlopeTolerance = 1e-6;

/// Finds the parametrized time at which the optimal measurement switches.
///
/// The interval is sampled; wherever the strict minimizer among {Q1, Q2}
/// or, inside Q2, between the x and y axes changes, the corresponding
/// difference is bisected down to 1e-14 in p. Ties (gaps below 1e-12) are
/// never counted as a side of a switch, so tangencies are ignored. The
/// smallest switch wins. If none exists the slope-change detector runs on
/// the sampled classical correlation. Absence is returned, not thrown.
SuddenChange detect_p_sc(const XState& initial, ChannelKind channel,
                         const SearchInterval& interval = {});
SuddenChange detect_p_sc(const ModelPoint& point, ChannelKind channel,
                         const SearchInterval& interval = {},
                         const QuadratureConfig& quad = {});

/// Grid-resolution switch detection on stored branch / axis tags. The
/// returned p_sc is the first grid point after the switch.
SuddenChange branch_switch(const Trajectory& traj);

/// Locates where |dC/dp| (five-point stencil) drops below slope_tol and
/// stays there for the rest of the grid. The estimate is the left edge of
/// the first flat stencil. The slope two points before the cutoff must exceed
/// 10 * slope_tol, so a smooth fade to zero does not count. Needs a uniform
/// grid of at least 5 points.
SuddenChange slope_change(const Trajectory& traj,
                          double slope_tol = kSlopeTolerance);

enum class DynamicsType { TypeI, TypeII, TypeIII };
std::string_view to_string(DynamicsType type) noexcept;

/// TypeII if a sudden change exists (branch switch or slope change);
/// otherwise TypeI if C varies by less than tol while Q decays; otherwise
/// TypeIII if C and Q both decay monotonically. Throws
/// Error{Unclassifiable} if no rule matches and Error{Validation} for
/// fewer than 50 points.
DynamicsType classify(const Trajectory& traj, double tol = 1e-6);

struct PInterval {
  double begin = 0.0;
  double end = 0.0;
};

/// Longest contiguous run of grid points where discord - classical > 1e-9.
std::optional<PInterval> q_exceeds_c_interval(const Trajectory& traj);

enum class ScanParameter { Lambda, Gamma, Delta };
std::string_view to_string(ScanParameter parameter) noexcept;
ScanParameter parse_scan_parameter(std::string_view text);

/// lambda_c = 1, gamma_c = 0 and the ferromagnetic point Delta = 1.
double default_critical_value(ScanParameter parameter) noexcept;

struct ScanRequest {
  ScanParameter parameter = ScanParameter::Lambda;
  /// For Delta scans an empty grid means every XXZ row of the table.
  std::vector<double> grid;
  ChannelKind channel = ChannelKind::PF;
  double lambda = 0.5;  // held fixed in gamma scans
  double gamma = 1.0;   // held fixed in lambda scans
  int r = 1;
  /// Required for Delta scans; rows are matched on delta and r.
  std::span<const CorrelatorRow> table;
  /// Exact critical points (lambda = 1, gamma = 0, Delta = +-1) are dropped
  /// from the grid unless this is set.
  bool keep_critical_points = false;
  std::optional<double> critical_value;
  int divergence_offset = 10;
  double divergence_factor = 2.0;
  int monotone_window = 5;
  SearchInterval search;
  QuadratureConfig quad;
};

/// Finite-resolution stand-in for a diverging derivative: |dp_sc/dx| at
/// the grid point nearest the critical value must be at least `factor`
/// times its value `offset` grid steps further away.
struct DivergenceIndicator {
  bool evaluable = false;
  bool fired = false;
  double near_parameter = 0.0;
  double far_parameter = 0.0;
  double near_derivative = 0.0;
  double far_derivative = 0.0;
  double ratio = 0.0;
  /// |derivative| strictly increases over the last monotone_window grid
  /// points approaching the critical value.
  bool monotone_tail = false;
};

struct CriticalScan {
  ScanParameter parameter = ScanParameter::Lambda;
  ChannelKind channel = ChannelKind::PF;
  double critical_value = 1.0;
  std::vector<double> grid;
  std::vector<std::optional<double>> p_sc;
  /// Central differences where p_sc exists at three consecutive points,
  /// one-sided at the ends of the grid.
  std::vector<std::optional<double>> derivative;
  DivergenceIndicator divergence;
};

/// p_sc and its derivative over a tuning-parameter grid. Grid points run in
/// parallel; results keep grid order. Throws Error{InsufficientData} when no
/// three consecutive grid points have a p_sc.
CriticalScan scan(const ScanRequest& request);

}  // namespace qcorr
