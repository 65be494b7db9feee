#include "qcorr/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {

using PanelRule = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Panel {
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double lo,
                     double hi) {
  double error = 0.0;
  // max_depth = 0 makes boost evaluate one Kronrod panel with its embedded
  // Gauss estimate and no internal recursion.
  const double value = PanelRule::integrate(f, lo, hi, 0, 0.0, &error);
  // boost reports |K - G| on the reference interval [-1, 1]; rescale to
  // [lo, hi] so narrow panels near a singularity can converge.
  return {lo, hi, value, 0.5 * (hi - lo) * error};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error(ErrorKind::Validation, "quadrature tolerances must be > 0");
  }
  if (max_subdivisions == 0) {
    throw Error(ErrorKind::Validation,
                "quadrature max_subdivisions must be >= 1");
  }
}

QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, const QuadratureConfig& config) {
  config.validate();

  std::priority_queue<Panel> panels;
  panels.push(evaluate_panel(f, lo, hi));
  double total = panels.top().value;
  double error = panels.top().error;

  auto converged = [&] {
    return error <= std::max(config.abs_tol, config.rel_tol * std::abs(total));
  };

  while (!converged()) {
    if (panels.size() >= config.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature on [" << lo << ", " << hi << "] did not reach tolerance"
          << " after " << panels.size() << " panels (error estimate " << error
          << ")";
      throw Error(ErrorKind::QuadratureFailure, msg.str());
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw Error(ErrorKind::QuadratureFailure,
                  "quadrature panel width reached machine resolution");
    }
    const Panel left = evaluate_panel(f, worst.lo, mid);
    const Panel right = evaluate_panel(f, mid, worst.hi);
    panels.push(left);
    panels.push(right);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }

  // Re-sum from the panel list so the running update does not accumulate
  // cancellation error.
  std::vector<Panel> remaining;
  remaining.reserve(panels.size());
  while (!panels.empty()) {
    remaining.push_back(panels.top());
    panels.pop();
  }
  std::sort(remaining.begin(), remaining.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  QuadratureResult result;
  result.panels = remaining.size();
  for (const Panel& p : remaining) {
    result.value += p.value;
    result.error += p.error;
  }
  return result;
}

}  // namespace qcorr
