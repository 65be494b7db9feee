#include "qcorr/measures.hpp"

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {

constexpr double kProbabilitySlack = 1e-12;
constexpr double kBranchTie = 1e-12;

double xlog2x(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// -x log2(x / total), zero when x vanishes.
double relative_term(double x, double total) {
  return (x > 0.0 && total > 0.0) ? -x * std::log2(x / total) : 0.0;
}

double binary_entropy(double p) {
  p = std::clamp(p, 0.0, 1.0);
  return xlog2x(p) + xlog2x(1.0 - p);
}

// Entropy of a 2x2 Hermitian, trace-one matrix.
double qubit_entropy(const Matrix2c& rho) {
  const double mean = 0.5 * (rho(0, 0).real() + rho(1, 1).real());
  const double half_gap = 0.5 * (rho(0, 0).real() - rho(1, 1).real());
  const double radius = std::sqrt(half_gap * half_gap + std::norm(rho(0, 1)));
  return xlog2x(std::max(mean + radius, 0.0)) +
         xlog2x(std::max(mean - radius, 0.0));
}

Matrix2c projector(const MeasurementBasis& m, int sign) {
  const double nx = std::sin(m.theta) * std::cos(m.phi);
  const double ny = std::sin(m.theta) * std::sin(m.phi);
  const double nz = std::cos(m.theta);
  const double s = static_cast<double>(sign);
  Matrix2c out;
  out(0, 0) = 0.5 * (1.0 + s * nz);
  out(1, 1) = 0.5 * (1.0 - s * nz);
  out(0, 1) = 0.5 * s * std::complex<double>(nx, -ny);
  out(1, 0) = 0.5 * s * std::complex<double>(nx, ny);
  return out;
}

// tr_B[(I x P) rho (I x P)] = tr_B[rho (I x P)] for a projector P on B.
Matrix2c measured_block(const Matrix4c& rho, const Matrix2c& proj) {
  Matrix2c out = Matrix2c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out(i, j) += rho(2 * i + k, 2 * j + l) * proj(l, k);
  return out;
}

double conditional_entropy(const Matrix4c& rho, const MeasurementBasis& m) {
  double total = 0.0;
  for (int sign : {+1, -1}) {
    const Matrix2c block = measured_block(rho, projector(m, sign));
    const double p = block.trace().real();
    if (p <= 0.0) continue;
    total += p * qubit_entropy(block / p);
  }
  return total;
}

Matrix2c partial_trace_a(const Matrix4c& rho) {
  Matrix2c out = Matrix2c::Zero();
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i) out(k, l) += rho(2 * i + k, 2 * i + l);
  return out;
}

double dense_entropy(const Matrix4c& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += xlog2x(std::max(solver.eigenvalues()(i), 0.0));
  return s;
}

struct PolishContext {
  const Matrix4c* rho;
};

double polish_objective(const gsl_vector* v, void* params) {
  const auto* ctx = static_cast<const PolishContext*>(params);
  return conditional_entropy(*ctx->rho,
                             {gsl_vector_get(v, 0), gsl_vector_get(v, 1)});
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* s) const {
    gsl_multimin_fminimizer_free(s);
  }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

// Nelder-Mead from a grid cell. Returns the best value seen, never worse
// than the start.
std::pair<double, MeasurementBasis> polish(const Matrix4c& rho,
                                           MeasurementBasis start,
                                           double start_value, double step_theta,
                                           double step_phi, double tolerance) {
  PolishContext ctx{&rho};
  gsl_multimin_function fn{&polish_objective, 2, &ctx};
  std::unique_ptr<gsl_vector, VectorDeleter> x0(gsl_vector_alloc(2));
  std::unique_ptr<gsl_vector, VectorDeleter> steps(gsl_vector_alloc(2));
  gsl_vector_set(x0.get(), 0, start.theta);
  gsl_vector_set(x0.get(), 1, start.phi);
  gsl_vector_set(steps.get(), 0, step_theta);
  gsl_vector_set(steps.get(), 1, step_phi);
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2));
  gsl_multimin_fminimizer_set(solver.get(), &fn, x0.get(), steps.get());

  double previous = start_value;
  int stalled = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(solver.get());
    const double value = solver->fval;
    stalled = (previous - value) < tolerance ? stalled + 1 : 0;
    previous = value;
    if (size < 1e-9 || (stalled >= 20 && size < 1e-6)) break;
  }
  if (solver->fval < start_value) {
    return {solver->fval,
            {gsl_vector_get(solver->x, 0), gsl_vector_get(solver->x, 1)}};
  }
  return {start_value, start};
}

}  // namespace

std::string_view to_string(DiscordBranch branch) noexcept {
  return branch == DiscordBranch::Q1 ? "Q1" : "Q2";
}

std::string_view to_string(MeasurementAxis axis) noexcept {
  switch (axis) {
    case MeasurementAxis::Z: return "z";
    case MeasurementAxis::X: return "x";
    case MeasurementAxis::Y: return "y";
  }
  return "?";
}

double entropy_bits(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p < -kProbabilitySlack) {
      std::ostringstream msg;
      msg << "probability " << p << " is negative";
      throw Error(ErrorKind::NegativeProbability, msg.str());
    }
    s += xlog2x(std::max(p, 0.0));
  }
  return s;
}

double marginal_entropy(const XState& x) {
  const double c4 = x.a - x.d;
  return binary_entropy(0.5 * (1.0 + c4));
}

double joint_entropy(const XState& x) {
  const Spectrum spectrum = eigenvalues(x);
  return entropy_bits(spectrum.values);
}

double mutual_information(const XState& x) {
  // I = S(A) + S(B) + sum lambda log2 lambda with S(A) = S(B).
  return 2.0 * marginal_entropy(x) - joint_entropy(x);
}

AnalyticDiscord discord_analytic(const XState& x) {
  const double base = marginal_entropy(x) - joint_entropy(x);

  AnalyticDiscord out;
  out.q1 = base + relative_term(x.a, x.a + x.b) + relative_term(x.b, x.a + x.b) +
           relative_term(x.d, x.d + x.b) + relative_term(x.b, x.d + x.b);

  const double amd = x.a - x.d;
  const double sz = std::abs(x.z) + std::abs(x.f);
  const double gamma = std::min(std::sqrt(amd * amd + 4.0 * sz * sz), 1.0);
  out.q2 = base + xlog2x(0.5 * (1.0 + gamma)) + xlog2x(0.5 * (1.0 - gamma));

  const CorrelationCoefficients c = coefficients(x);
  auto axis_candidate = [&](double corr) {
    const double g = std::min(std::sqrt(c.c4 * c.c4 + corr * corr), 1.0);
    return base + binary_entropy(0.5 * (1.0 + g));
  };
  out.q2_x = axis_candidate(c.c1);
  out.q2_y = axis_candidate(c.c2);

  if (out.q1 < out.q2 - kBranchTie) {
    out.branch = DiscordBranch::Q1;
    out.axis = MeasurementAxis::Z;
    out.discord = out.q1;
  } else {
    out.branch = DiscordBranch::Q2;
    out.axis = std::abs(c.c1) >= std::abs(c.c2) ? MeasurementAxis::X
                                                : MeasurementAxis::Y;
    out.discord = out.q2;
  }
  return out;
}

double conditional_entropy_measured(const XState& x, const MeasurementBasis& m) {
  return conditional_entropy(to_matrix(x), m);
}

NumericDiscord discord_numeric(const XState& x,
                               const NumericDiscordOptions& options) {
  if (options.theta_points < 2 || options.phi_points < 1) {
    throw Error(ErrorKind::Validation,
                "numeric discord grid needs >= 2 theta and >= 1 phi points");
  }
  const Matrix4c rho = to_matrix(x);
  const double pi = std::numbers::pi;
  const double dtheta = pi / (options.theta_points - 1);
  const double dphi =
      options.phi_points > 1 ? 0.5 * pi / (options.phi_points - 1) : 0.0;

  double best = std::numeric_limits<double>::infinity();
  MeasurementBasis best_basis;
  for (int i = 0; i < options.theta_points; ++i) {
    for (int j = 0; j < options.phi_points; ++j) {
      const MeasurementBasis m{i * dtheta, j * dphi};
      const double value = conditional_entropy(rho, m);
      if (value < best) {
        best = value;
        best_basis = m;
      }
    }
  }
  if (options.refine) {
    const auto [value, basis] =
        polish(rho, best_basis, best, dtheta, dphi > 0.0 ? dphi : dtheta,
               options.refine_tolerance);
    best = value;
    best_basis = basis;
  }

  NumericDiscord out;
  out.conditional_entropy = best;
  out.basis = best_basis;
  out.discord = qubit_entropy(partial_trace_a(rho)) - dense_entropy(rho) + best;
  return out;
}

CorrelationTriple triple(const XState& x, DiscordMethod method) {
  CorrelationTriple t;
  t.mutual = mutual_information(x);
  t.discord = method == DiscordMethod::Analytic ? discord_analytic(x).discord
                                                : discord_numeric(x).discord;
  t.classical = t.mutual - t.discord;
  return t;
}

}  // namespace qcorr
