#include "qcorr/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "parallel.hpp"
#include "qcorr/error.hpp"

namespace qcorr {

namespace {

constexpr double kTieGap = 1e-12;
constexpr double kRootWidth = 1e-14;
constexpr double kQExceedsC = 1e-9;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kCriticalMatch = 1e-12;

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::Validation, "p grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] < 1.0)) {
      throw Error(ErrorKind::Validation, "p grid must lie in [0, 1)");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::Validation, "p grid must be strictly increasing");
    }
  }
}

enum class SwitchKind { Branch, Axis };

struct SwitchHit {
  std::size_t left;
  std::size_t right;
  SwitchKind kind;
};

bool strict_branch(const AnalyticDiscord& c) {
  return std::abs(c.q1 - c.q2) > kTieGap;
}

bool strict_axis(const AnalyticDiscord& c) {
  return strict_branch(c) && c.q2 < c.q1 && std::abs(c.q2_x - c.q2_y) > kTieGap;
}

DiscordBranch branch_of(const AnalyticDiscord& c) {
  return c.q1 < c.q2 ? DiscordBranch::Q1 : DiscordBranch::Q2;
}

MeasurementAxis axis_of(const AnalyticDiscord& c) {
  return c.q2_x < c.q2_y ? MeasurementAxis::X : MeasurementAxis::Y;
}

// First place where the strict minimizer changes. Points whose candidates
// tie are skipped, so each side of a reported switch is a strict winner.
std::vector<SwitchHit> first_switches(std::span<const AnalyticDiscord> samples) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t last_branch = kNone;
  std::size_t last_axis = kNone;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const AnalyticDiscord& c = samples[i];
    std::vector<SwitchHit> hits;
    if (strict_branch(c)) {
      if (last_branch != kNone && branch_of(samples[last_branch]) != branch_of(c)) {
        hits.push_back({last_branch, i, SwitchKind::Branch});
      }
      last_branch = i;
      if (branch_of(c) == DiscordBranch::Q1) last_axis = kNone;
    }
    if (strict_axis(c)) {
      if (last_axis != kNone && axis_of(samples[last_axis]) != axis_of(c)) {
        hits.push_back({last_axis, i, SwitchKind::Axis});
      }
      last_axis = i;
    }
    if (!hits.empty()) return hits;
  }
  return {};
}

double switch_function(const AnalyticDiscord& c, SwitchKind kind) {
  return kind == SwitchKind::Branch ? c.q1 - c.q2 : c.q2_x - c.q2_y;
}

MeasurementAxis optimal_axis(const AnalyticDiscord& c) {
  return branch_of(c) == DiscordBranch::Q1 ? MeasurementAxis::Z : axis_of(c);
}

double bisect_switch(const XState& initial, ChannelKind channel, double lo,
                     double hi, SwitchKind kind) {
  auto value = [&](double p) {
    return switch_function(discord_analytic(evolve_state(initial, channel, p)),
                           kind);
  };
  const bool lo_negative = value(lo) < 0.0;
  for (int iter = 0; iter < 200 && hi - lo > kRootWidth; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((value(mid) < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> classical_series(const Trajectory& traj) {
  std::vector<double> c(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) c[i] = traj.triples[i].classical;
  return c;
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + kMonotoneSlack) return false;
  }
  return true;
}

bool is_critical(ScanParameter parameter, double value) {
  switch (parameter) {
    case ScanParameter::Lambda: return std::abs(value - 1.0) < kCriticalMatch;
    case ScanParameter::Gamma: return std::abs(value) < kCriticalMatch;
    case ScanParameter::Delta:
      return std::abs(std::abs(value) - 1.0) < kCriticalMatch;
  }
  return false;
}

std::vector<XState> scan_states(const ScanRequest& request,
                                std::vector<double>& grid) {
  std::vector<XState> states(grid.size());
  if (request.parameter == ScanParameter::Delta) {
    if (request.table.empty()) {
      throw Error(ErrorKind::Validation, "Delta scans need a correlator table");
    }
    std::vector<const CorrelatorRow*> rows;
    for (const CorrelatorRow& row : request.table) {
      if (row.point.kind == ModelKind::XXZ && row.point.r == request.r) {
        rows.push_back(&row);
      }
    }
    std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
      return a->point.delta < b->point.delta;
    });
    if (grid.empty()) {
      for (const auto* row : rows) {
        if (request.keep_critical_points ||
            !is_critical(ScanParameter::Delta, row->point.delta)) {
          grid.push_back(row->point.delta);
        }
      }
      states.resize(grid.size());
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto* r) {
        return std::abs(r->point.delta - grid[i]) <= kCriticalMatch;
      });
      if (it == rows.end()) {
        std::ostringstream msg;
        msg << "correlator table has no XXZ row with delta = " << grid[i]
            << " and r = " << request.r;
        throw Error(ErrorKind::Validation, msg.str());
      }
      states[i] = from_correlators((*it)->values);
    }
    return states;
  }

  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const double lambda =
        request.parameter == ScanParameter::Lambda ? grid[i] : request.lambda;
    const double gamma =
        request.parameter == ScanParameter::Gamma ? grid[i] : request.gamma;
    states[i] = initial_state(ModelPoint::xy(lambda, gamma, request.r),
                              request.quad);
  });
  return states;
}

DivergenceIndicator divergence_indicator(const CriticalScan& s,
                                         const ScanRequest& request) {
  DivergenceIndicator out;
  std::optional<std::size_t> near;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    if (!s.derivative[i]) continue;
    if (!near || std::abs(s.grid[i] - s.critical_value) <
                     std::abs(s.grid[*near] - s.critical_value)) {
      near = i;
    }
  }
  if (!near) return out;

  // Walk away from the critical value.
  const long step = s.grid[*near] < s.critical_value ? -1 : 1;
  const long far = static_cast<long>(*near) + step * request.divergence_offset;
  if (far < 0 || far >= static_cast<long>(s.grid.size()) ||
      !s.derivative[static_cast<std::size_t>(far)]) {
    return out;
  }
  out.evaluable = true;
  out.near_parameter = s.grid[*near];
  out.far_parameter = s.grid[static_cast<std::size_t>(far)];
  out.near_derivative = *s.derivative[*near];
  out.far_derivative = *s.derivative[static_cast<std::size_t>(far)];
  const double far_mag = std::abs(out.far_derivative);
  out.ratio = far_mag > 0.0 ? std::abs(out.near_derivative) / far_mag
                            : std::numeric_limits<double>::infinity();
  out.fired = std::abs(out.near_derivative) >=
              request.divergence_factor * far_mag;

  out.monotone_tail = true;
  for (int k = 0; k + 1 < request.monotone_window; ++k) {
    const long outer = static_cast<long>(*near) + step * (k + 1);
    const long inner = static_cast<long>(*near) + step * k;
    if (outer < 0 || outer >= static_cast<long>(s.grid.size()) ||
        !s.derivative[static_cast<std::size_t>(outer)]) {
      out.monotone_tail = false;
      break;
    }
    if (!(std::abs(*s.derivative[static_cast<std::size_t>(inner)]) >
          std::abs(*s.derivative[static_cast<std::size_t>(outer)]))) {
      out.monotone_tail = false;
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> grid(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

XState initial_state(const ModelPoint& point, const QuadratureConfig& quad) {
  return from_correlators(correlator_set(point, quad));
}

XState evolve_state(const XState& initial, ChannelKind channel, double p) {
  const ParametrizedTime time(p);
  if (channel == ChannelKind::AD) return evolve_two_qubit(initial, channel, time);
  return from_coefficients(evolve_coefficients(coefficients(initial), channel, time));
}

Trajectory trajectory(const XState& initial, ChannelKind channel,
                      std::span<const double> p_grid) {
  check_grid(p_grid);
  initial.validate();
  Trajectory out;
  out.channel = channel;
  out.initial = initial;
  out.p_grid.assign(p_grid.begin(), p_grid.end());
  out.triples.reserve(p_grid.size());
  out.branches.reserve(p_grid.size());
  out.axes.reserve(p_grid.size());
  out.candidates.reserve(p_grid.size());
  for (double p : p_grid) {
    const XState state = evolve_state(initial, channel, p);
    const AnalyticDiscord discord = discord_analytic(state);
    CorrelationTriple t;
    t.mutual = mutual_information(state);
    t.discord = discord.discord;
    t.classical = t.mutual - t.discord;
    out.triples.push_back(t);
    out.branches.push_back(discord.branch);
    out.axes.push_back(discord.axis);
    out.candidates.push_back(discord);
  }
  return out;
}

Trajectory trajectory(const ModelPoint& point, ChannelKind channel,
                      std::span<const double> p_grid,
                      const QuadratureConfig& quad) {
  Trajectory out = trajectory(initial_state(point, quad), channel, p_grid);
  out.model = point;
  return out;
}

Trajectory trajectory(const CorrelatorSet& correlators, ChannelKind channel,
                      std::span<const double> p_grid) {
  correlators.validate();
  return trajectory(from_correlators(correlators), channel, p_grid);
}

std::string_view to_string(DetectionMethod method) noexcept {
  return method == DetectionMethod::BranchCrossing ? "branch-crossing"
                                                   : "slope-change";
}

SuddenChange detect_p_sc(const XState& initial, ChannelKind channel,
                         const SearchInterval& interval) {
  if (!(interval.lo >= 0.0 && interval.hi < 1.0 && interval.lo < interval.hi) ||
      interval.samples < 5) {
    throw Error(ErrorKind::Validation,
                "search interval must satisfy 0 <= lo < hi < 1 with >= 5 samples");
  }
  const std::vector<double> grid =
      uniform_grid(interval.lo, interval.hi, interval.samples);
  const Trajectory sampled = trajectory(initial, channel, grid);

  SuddenChange out;
  const auto hits = first_switches(sampled.candidates);
  for (const SwitchHit& hit : hits) {
    const double p = bisect_switch(initial, channel, grid[hit.left],
                                   grid[hit.right], hit.kind);
    if (!out.p_sc || p < *out.p_sc) {
      out.p_sc = p;
      out.method = DetectionMethod::BranchCrossing;
      out.before = optimal_axis(sampled.candidates[hit.left]);
      out.after = optimal_axis(sampled.candidates[hit.right]);
    }
  }
  if (out.p_sc) return out;
  return slope_change(sampled);
}

SuddenChange detect_p_sc(const ModelPoint& point, ChannelKind channel,
                         const SearchInterval& interval,
                         const QuadratureConfig& quad) {
  return detect_p_sc(initial_state(point, quad), channel, interval);
}

SuddenChange branch_switch(const Trajectory& traj) {
  SuddenChange out;
  const auto hits = first_switches(traj.candidates);
  for (const SwitchHit& hit : hits) {
    // Both candidates of a step share the same right index.
    out.p_sc = traj.p_grid[hit.right];
    out.method = DetectionMethod::BranchCrossing;
    out.before = optimal_axis(traj.candidates[hit.left]);
    out.after = optimal_axis(traj.candidates[hit.right]);
  }
  return out;
}

constexpr double kKinkFactor = 10.0;

SuddenChange slope_change(const Trajectory& traj, double slope_tol) {
  SuddenChange out;
  out.method = DetectionMethod::SlopeChange;
  const std::size_t n = traj.size();
  if (n < 5) return out;
  const double h = (traj.p_grid.back() - traj.p_grid.front()) /
                   static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(traj.p_grid[i] - traj.p_grid[i - 1] - h) > 1e-9 * (1.0 + h)) {
      throw Error(ErrorKind::Validation, "slope-change detection needs a uniform grid");
    }
  }
  const std::vector<double> c = classical_series(traj);
  std::vector<double> slope(n, 0.0);
  std::optional<std::size_t> last_sloped;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    slope[i] = std::abs(c[i - 2] - 8.0 * c[i - 1] + 8.0 * c[i + 1] - c[i + 2]) / (12.0 * h);
    if (slope[i] > slope_tol) last_sloped = i;
  }
  if (!last_sloped || *last_sloped + 3 >= n) return out;
  // A slope fading smoothly through the tolerance is not a kink.
  if (*last_sloped < 4 || slope[*last_sloped - 2] < kKinkFactor * slope_tol) return out;
  out.p_sc = traj.p_grid[*last_sloped - 1];
  return out;
}

std::string_view to_string(DynamicsType type) noexcept {
  switch (type) {
    case DynamicsType::TypeI: return "TypeI";
    case DynamicsType::TypeII: return "TypeII";
    case DynamicsType::TypeIII: return "TypeIII";
  }
  return "?";
}

DynamicsType classify(const Trajectory& traj, double tol) {
  if (traj.size() < 50) {
    throw Error(ErrorKind::Validation, "classification needs >= 50 grid points");
  }
  if (branch_switch(traj) || slope_change(traj)) return DynamicsType::TypeII;

  const std::vector<double> c = classical_series(traj);
  std::vector<double> q(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) q[i] = traj.triples[i].discord;

  const auto [c_min, c_max] = std::minmax_element(c.begin(), c.end());
  const bool q_decays = q.front() - q.back() > tol;
  if (*c_max - *c_min < tol && q_decays) return DynamicsType::TypeI;
  if (q_decays && c.front() - c.back() > tol && non_increasing(c) &&
      non_increasing(q)) {
    return DynamicsType::TypeIII;
  }
  throw Error(ErrorKind::Unclassifiable,
              "trajectory matches none of the three dynamics types");
}

std::optional<PInterval> q_exceeds_c_interval(const Trajectory& traj) {
  std::optional<PInterval> best;
  std::size_t best_len = 0;
  std::size_t run_start = 0;
  std::size_t run_len = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& t = traj.triples[i];
    if (t.discord - t.classical > kQExceedsC) {
      if (run_len == 0) run_start = i;
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best = PInterval{traj.p_grid[run_start], traj.p_grid[i]};
      }
    } else {
      run_len = 0;
    }
  }
  return best;
}

std::string_view to_string(ScanParameter parameter) noexcept {
  switch (parameter) {
    case ScanParameter::Lambda: return "lambda";
    case ScanParameter::Gamma: return "gamma";
    case ScanParameter::Delta: return "delta";
  }
  return "?";
}

ScanParameter parse_scan_parameter(std::string_view text) {
  std::string key(text);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (key == "lambda") return ScanParameter::Lambda;
  if (key == "gamma") return ScanParameter::Gamma;
  if (key == "delta") return ScanParameter::Delta;
  throw Error(ErrorKind::Validation,
              "unknown scan parameter '" + std::string(text) + "'");
}

double default_critical_value(ScanParameter parameter) noexcept {
  return parameter == ScanParameter::Gamma ? 0.0 : 1.0;
}

CriticalScan scan(const ScanRequest& request) {
  CriticalScan out;
  out.parameter = request.parameter;
  out.channel = request.channel;
  out.critical_value =
      request.critical_value.value_or(default_critical_value(request.parameter));

  std::vector<double> grid;
  for (double v : request.grid) {
    if (request.keep_critical_points || !is_critical(request.parameter, v)) {
      grid.push_back(v);
    }
  }
  if (request.parameter != ScanParameter::Delta && grid.empty()) {
    throw Error(ErrorKind::Validation, "scan grid is empty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::Validation, "scan grid must be strictly increasing");
    }
  }

  const std::vector<XState> states = scan_states(request, grid);
  out.grid = grid;
  out.p_sc.resize(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    out.p_sc[i] = detect_p_sc(states[i], request.channel, request.search).p_sc;
  });

  const std::size_t n = grid.size();
  out.derivative.resize(n);
  std::size_t longest_run = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    run = out.p_sc[i] ? run + 1 : 0;
    longest_run = std::max(longest_run, run);
  }
  if (longest_run < 3) {
    throw Error(ErrorKind::InsufficientData,
                "fewer than 3 consecutive grid points have a sudden change");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.p_sc[i]) continue;
    const bool has_left = i > 0 && out.p_sc[i - 1];
    const bool has_right = i + 1 < n && out.p_sc[i + 1];
    if (has_left && has_right) {
      out.derivative[i] =
          (*out.p_sc[i + 1] - *out.p_sc[i - 1]) / (grid[i + 1] - grid[i - 1]);
    } else if (i == 0 && has_right) {
      out.derivative[i] = (*out.p_sc[1] - *out.p_sc[0]) / (grid[1] - grid[0]);
    } else if (i + 1 == n && has_left) {
      out.derivative[i] =
          (*out.p_sc[i] - *out.p_sc[i - 1]) / (grid[i] - grid[i - 1]);
    }
  }
  out.divergence = divergence_indicator(out, request);
  return out;
}

}  // namespace qcorr
