#include "qcorr/correlators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRangeSlack = 1e-12;

// (1/pi) * integral_0^pi cos(r phi) (1 + lambda cos phi) / omega_phi
double even_part(int r, double lambda, double gamma,
                 const QuadratureConfig& quad) {
  auto integrand = [=](double phi) {
    const double omega = dispersion(phi, lambda, gamma);
    const double numerator = std::cos(r * phi) * (1.0 + lambda * std::cos(phi));
    return omega > 0.0 ? numerator / omega : 0.0;
  };
  return integrate(integrand, 0.0, kPi, quad).value / kPi;
}

// (lambda/pi) * integral_0^pi sin(r phi) sin(phi) / omega_phi, without the
// gamma prefactor so that gamma -> -gamma flips the sign exactly.
double odd_part(int r, double lambda, double gamma,
                const QuadratureConfig& quad) {
  if (r == 0 || lambda == 0.0) return 0.0;
  auto integrand = [=](double phi) {
    const double omega = dispersion(phi, lambda, gamma);
    const double numerator = std::sin(r * phi) * std::sin(phi);
    return omega > 0.0 ? numerator / omega : 0.0;
  };
  return lambda * integrate(integrand, 0.0, kPi, quad).value / kPi;
}

void check_xy_parameters(double lambda, double gamma) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::Validation, "lambda must be finite and >= 0");
  }
  if (!(std::abs(gamma) <= 1.0)) {
    throw Error(ErrorKind::Validation, "gamma must lie in [-1, 1]");
  }
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::XY: return "xy";
    case ModelKind::TIM: return "tim";
    case ModelKind::XXZ: return "xxz";
    case ModelKind::External: return "external";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  const std::string key = lowercase(text);
  if (key == "xy") return ModelKind::XY;
  if (key == "tim") return ModelKind::TIM;
  if (key == "xxz") return ModelKind::XXZ;
  if (key == "external") return ModelKind::External;
  throw Error(ErrorKind::Validation,
              "unknown model kind '" + std::string(text) + "'");
}

ModelPoint ModelPoint::xy(double lambda, double gamma, int r) {
  ModelPoint p{ModelKind::XY, lambda, gamma, 0.0, r};
  p.validate();
  return p;
}

ModelPoint ModelPoint::tim(double lambda, int r, double gamma_sign) {
  ModelPoint p{ModelKind::TIM, lambda, gamma_sign < 0.0 ? -1.0 : 1.0, 0.0, r};
  p.validate();
  return p;
}

ModelPoint ModelPoint::xxz(double delta, int r) {
  ModelPoint p{ModelKind::XXZ, 0.0, 0.0, delta, r};
  p.validate();
  return p;
}

ModelPoint ModelPoint::external(int r) {
  ModelPoint p{ModelKind::External, 0.0, 0.0, 0.0, r};
  p.validate();
  return p;
}

void ModelPoint::validate() const {
  if (r < 1) throw Error(ErrorKind::Validation, "separation r must be >= 1");
  switch (kind) {
    case ModelKind::XY:
      check_xy_parameters(lambda, gamma);
      break;
    case ModelKind::TIM:
      check_xy_parameters(lambda, gamma);
      if (std::abs(gamma) != 1.0) {
        throw Error(ErrorKind::Validation, "TIM points require |gamma| = 1");
      }
      break;
    case ModelKind::XXZ:
      if (!std::isfinite(delta)) {
        throw Error(ErrorKind::Validation, "delta must be finite");
      }
      break;
    case ModelKind::External:
      break;
  }
}

void CorrelatorSet::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"mz", mz}, {"sxx", sxx}, {"syy", syy}, {"szz", szz}};
  for (const auto& [name, value] : fields) {
    if (!(std::abs(value) <= 1.0 + kRangeSlack)) {
      std::ostringstream msg;
      msg << "correlator " << name << " = " << value << " outside [-1, 1]";
      throw Error(ErrorKind::RangeError, msg.str());
    }
  }
}

double dispersion(double phi, double lambda, double gamma) noexcept {
  const double anisotropic = gamma * lambda * std::sin(phi);
  const double field = 1.0 + lambda * std::cos(phi);
  return std::sqrt(anisotropic * anisotropic + field * field);
}

double magnetization(double lambda, double gamma, const QuadratureConfig& quad) {
  check_xy_parameters(lambda, gamma);
  return -even_part(0, lambda, gamma, quad);
}

double g_coefficient(int r, double lambda, double gamma,
                     const QuadratureConfig& quad) {
  check_xy_parameters(lambda, gamma);
  const int n = std::abs(r);
  const double odd = odd_part(n, lambda, gamma, quad);
  // sin(r phi) is odd in r, so G_{-n} picks up +gamma * odd.
  return even_part(n, lambda, gamma, quad) - (r < 0 ? -gamma : gamma) * odd;
}

CorrelatorSet correlator_set(const ModelPoint& point,
                             const QuadratureConfig& quad) {
  point.validate();
  if (point.kind == ModelKind::XXZ || point.kind == ModelKind::External) {
    throw Error(ErrorKind::UnsupportedModel,
                std::string("no closed-form correlators for model kind '") +
                    std::string(to_string(point.kind)) +
                    "'; load them from a correlator table");
  }
  if (point.r > kMaxSeparation) {
    throw Error(ErrorKind::SizeLimit,
                "separation r = " + std::to_string(point.r) + " exceeds " +
                    std::to_string(kMaxSeparation));
  }
  quad.validate();

  const int r = point.r;
  const double lambda = point.lambda;
  const double gamma = point.gamma;

  std::vector<double> even(r + 1);
  std::vector<double> odd(r + 1);
  for (int n = 0; n <= r; ++n) {
    even[n] = even_part(n, lambda, gamma, quad);
    odd[n] = odd_part(n, lambda, gamma, quad);
  }
  auto g = [&](int k) {
    const int n = std::abs(k);
    return even[n] - (k < 0 ? -gamma : gamma) * odd[n];
  };

  Eigen::MatrixXd xx(r, r);
  Eigen::MatrixXd yy(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      xx(i, j) = g(i - j - 1);
      yy(i, j) = g(i - j + 1);
    }
  }

  CorrelatorSet out;
  out.mz = -even[0];
  out.sxx = r == 1 ? xx(0, 0) : xx.partialPivLu().determinant();
  out.syy = r == 1 ? yy(0, 0) : yy.partialPivLu().determinant();
  out.szz = out.mz * out.mz - g(r) * g(-r);
  return out;
}

}  // namespace qcorr
