#include "qcorr/oracle.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

#include "parallel.hpp"
#include "qcorr/channels.hpp"
#include "qcorr/dynamics.hpp"
#include "qcorr/error.hpp"

namespace qcorr {

namespace {

constexpr double kDiscrepancyLevel = 1e-6;
constexpr double kFaultSize = 1e-5;

double max_abs_diff(const CorrelationCoefficients& x,
                    const CorrelationCoefficients& y) {
  return std::max({std::abs(x.c1 - y.c1), std::abs(x.c2 - y.c2),
                   std::abs(x.c3 - y.c3), std::abs(x.c4 - y.c4)});
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<long>(mid)));
  }
  return m;
}

OracleCheck summarize(std::string name, const std::vector<double>& deviations,
                      double max_tol, double median_tol,
                      std::vector<OracleDiscrepancy>& discrepancies,
                      double discrepancy_level = kDiscrepancyLevel) {
  OracleCheck check;
  check.name = std::move(name);
  check.samples = deviations.size();
  check.max_tolerance = max_tol;
  check.median_tolerance = median_tol;
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    check.max_deviation = std::max(check.max_deviation, deviations[i]);
    if (deviations[i] > discrepancy_level) {
      discrepancies.push_back({check.name, i, deviations[i]});
    }
  }
  check.median_deviation = median(deviations);
  check.passed = check.max_deviation < max_tol &&
                 (median_tol < 0.0 || check.median_deviation < median_tol);
  return check;
}

std::vector<XState> draw_states(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<XState> states(n);
  for (auto& s : states) s = random_xstate(rng);
  return states;
}

// cos t |00> + sin t |11> for a spread of t, plus the |01> +- |10> states.
std::vector<XState> pure_states() {
  std::vector<XState> out;
  for (int k = 1; k < 40; ++k) {
    const double t = 0.5 * std::numbers::pi * k / 40.0;
    const double c = std::cos(t);
    const double s = std::sin(t);
    out.push_back({c * c, 0.0, s * s, 0.0, c * s});
    out.push_back({c * c, 0.0, s * s, 0.0, -c * s});
  }
  out.push_back({0.0, 0.5, 0.0, 0.5, 0.0});
  out.push_back({0.0, 0.5, 0.0, -0.5, 0.0});
  return out;
}

}  // namespace

std::string_view to_string(OracleFault fault) noexcept {
  switch (fault) {
    case OracleFault::None: return "none";
    case OracleFault::CoefficientMap: return "coefficient-map";
    case OracleFault::Spectrum: return "spectrum";
    case OracleFault::AnalyticDiscord: return "discord";
    case OracleFault::Completeness: return "completeness";
  }
  return "?";
}

OracleFault parse_oracle_fault(std::string_view text) {
  for (OracleFault f : {OracleFault::None, OracleFault::CoefficientMap,
                        OracleFault::Spectrum, OracleFault::AnalyticDiscord,
                        OracleFault::Completeness}) {
    if (text == to_string(f)) return f;
  }
  throw Error(ErrorKind::Validation,
              "unknown oracle fault '" + std::string(text) + "'");
}

bool OracleReport::passed() const noexcept {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const OracleCheck& c) { return c.passed; });
}

OracleReport run_oracle_suite(const OracleOptions& options) {
  if (options.n_states == 0 || options.completeness_points < 2) {
    throw Error(ErrorKind::Validation,
                "oracle suite needs >= 1 state and >= 2 completeness points");
  }
  OracleReport report;
  report.options = options;
  const OracleFault fault = options.fault;
  const std::vector<XState> states = draw_states(options.seed, options.n_states);
  const std::size_t n = states.size();

  {
    constexpr std::array<ChannelKind, 3> kChannels{ChannelKind::BF, ChannelKind::PF,
                                                   ChannelKind::BPF};
    constexpr int kTimes = 9;
    const std::size_t per_state = kChannels.size() * kTimes;
    std::vector<double> dev(n * per_state);
    detail::parallel_for(n, [&](std::size_t i) {
      const CorrelationCoefficients c0 = coefficients(states[i]);
      for (std::size_t k = 0; k < kChannels.size(); ++k) {
        for (int t = 0; t < kTimes; ++t) {
          const ParametrizedTime p(0.1 * (t + 1));
          CorrelationCoefficients mapped = evolve_coefficients(c0, kChannels[k], p);
          if (fault == OracleFault::CoefficientMap) mapped.c1 += kFaultSize;
          const CorrelationCoefficients kraus =
              coefficients(evolve_two_qubit(states[i], kChannels[k], p));
          dev[i * per_state + k * kTimes + static_cast<std::size_t>(t)] =
              max_abs_diff(mapped, kraus);
        }
      }
    });
    report.checks.push_back(
        summarize("coefficient-map", dev, 1e-12, -1.0, report.discrepancies));
  }

  {
    std::vector<double> dev(n);
    detail::parallel_for(n, [&](std::size_t i) {
      Spectrum closed = eigenvalues(states[i]);
      if (fault == OracleFault::Spectrum) closed.values[0] += kFaultSize;
      std::array<double, 4> sorted = closed.values;
      std::sort(sorted.begin(), sorted.end());
      const std::array<double, 4> dense = dense_eigenvalues(states[i]);
      double worst = 0.0;
      for (int k = 0; k < 4; ++k) {
        worst = std::max(worst, std::abs(sorted[k] - std::max(dense[k], 0.0)));
      }
      dev[i] = worst;
    });
    report.checks.push_back(
        summarize("spectrum", dev, 1e-12, -1.0, report.discrepancies));
  }

  {
    std::vector<double> dev(n);
    std::vector<double> excess(n);
    detail::parallel_for(n, [&](std::size_t i) {
      double analytic = discord_analytic(states[i]).discord;
      if (fault == OracleFault::AnalyticDiscord) analytic -= 1e-3;
      const double numeric = discord_numeric(states[i], options.numeric).discord;
      dev[i] = std::abs(analytic - numeric);
      excess[i] = std::max(numeric - analytic, 0.0);
    });
    report.checks.push_back(
        summarize("discord", dev, 1e-4, 1e-6, report.discrepancies));
    report.checks.push_back(
        summarize("discord-envelope", excess, 1e-9, -1.0, report.discrepancies));
  }

  {
    const std::vector<double> grid =
        uniform_grid(0.0, 1.0, options.completeness_points);
    std::vector<double> dev;
    for (ChannelKind kind :
         {ChannelKind::AD, ChannelKind::PF, ChannelKind::BF, ChannelKind::BPF}) {
      for (double p : grid) {
        KrausSet ops = kraus_ops(kind, ParametrizedTime(p));
        if (fault == OracleFault::Completeness) ops[0] *= 1.0 + kFaultSize;
        dev.push_back(completeness_deviation(ops));
      }
    }
    report.checks.push_back(
        summarize("completeness", dev, 1e-14, -1.0, report.discrepancies));
  }

  {
    std::vector<double> dev;
    for (const XState& x : pure_states()) {
      const CorrelationTriple t = triple(x);
      const double half = 0.5 * t.mutual;
      dev.push_back(std::max(std::abs(t.classical - half), std::abs(t.discord - half)));
    }
    report.checks.push_back(
        summarize("pure-state", dev, 1e-9, -1.0, report.discrepancies));
  }
  return report;
}

}  // namespace qcorr
