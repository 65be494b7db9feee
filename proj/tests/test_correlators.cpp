#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "qcorr/correlators.hpp"
#include "qcorr/error.hpp"
#include "support/oracles.hpp"

namespace qcorr {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no qcorr::Error thrown";
  return ErrorKind::Validation;
}

TEST(Dispersion, TrivialValues) {
  for (double phi : {0.0, 0.3, 1.7, std::numbers::pi}) {
    EXPECT_DOUBLE_EQ(dispersion(phi, 0.0, 0.3), 1.0);
  }
  EXPECT_DOUBLE_EQ(dispersion(0.0, 1.0, 1.0), 2.0);
  EXPECT_NEAR(dispersion(std::numbers::pi, 1.0, 0.5), 0.0, 1e-15);
}

TEST(Dispersion, EvenInGamma) {
  for (double phi : {0.1, 1.0, 2.5}) {
    EXPECT_EQ(dispersion(phi, 0.8, 0.4), dispersion(phi, 0.8, -0.4));
  }
}

TEST(Magnetization, FieldDominated) {
  EXPECT_NEAR(magnetization(0.0, 0.7), -1.0, 1e-12);
}

TEST(Magnetization, MatchesFixedRuleOracle) {
  EXPECT_NEAR(magnetization(0.7, 0.7), test::oracle_magnetization(0.7, 0.7), 1e-9);
  EXPECT_NEAR(magnetization(1.8, 0.3), test::oracle_magnetization(1.8, 0.3), 1e-9);
}

TEST(Magnetization, SymmetricInGamma) {
  EXPECT_EQ(magnetization(0.5, 1.0), magnetization(0.5, -1.0));
}

TEST(Magnetization, IsingCriticalPoint) {
  // (1 + cos)/sqrt(2 + 2 cos) = cos(phi / 2)
  EXPECT_NEAR(magnetization(1.0, 1.0), -2.0 / std::numbers::pi, 1e-9);
}

TEST(GCoefficient, FieldDominated) {
  EXPECT_NEAR(g_coefficient(0, 0.0, 0.7), 1.0, 1e-12);
  EXPECT_NEAR(g_coefficient(1, 0.0, 0.7), 0.0, 1e-12);
}

TEST(GCoefficient, MatchesFixedRuleOracle) {
  for (int r : {-2, -1, 0, 1, 2, 3}) {
    EXPECT_NEAR(g_coefficient(r, 0.7, 0.7), test::oracle_g(r, 0.7, 0.7), 1e-9) << r;
  }
}

TEST(GCoefficient, ZeroIsMinusMagnetization) {
  EXPECT_NEAR(g_coefficient(0, 0.6, 0.4), -magnetization(0.6, 0.4), 1e-13);
}

TEST(GCoefficient, GammaFlipOnlyTouchesSecondIntegral) {
  // G_r(gamma) + G_r(-gamma) keeps only the first integral, which depends
  // on gamma through omega alone.
  for (int r : {-1, 1, 2}) {
    const double sum = g_coefficient(r, 0.7, 0.7) + g_coefficient(r, 0.7, -0.7);
    const auto first = [&](double phi) {
      const double re = 1.0 + 0.7 * std::cos(phi);
      return std::cos(r * phi) * re / dispersion(phi, 0.7, 0.7);
    };
    const double expected =
        2.0 * test::gauss_legendre(first, 0.0, std::numbers::pi, 200000) / std::numbers::pi;
    EXPECT_NEAR(sum, expected, 1e-9) << r;
  }
}

TEST(CorrelatorSet, FieldDominatedIsing) {
  const CorrelatorSet c = correlator_set(ModelPoint::tim(0.0, 1));
  EXPECT_NEAR(c.mz, -1.0, 1e-12);
  EXPECT_NEAR(c.sxx, 0.0, 1e-12);
  EXPECT_NEAR(c.syy, 0.0, 1e-12);
  EXPECT_NEAR(c.szz, 1.0, 1e-12);
}

TEST(CorrelatorSet, FieldDominatedAnyDistance) {
  for (int r = 1; r <= 6; ++r) {
    const CorrelatorSet c = correlator_set(ModelPoint::xy(0.0, 0.4, r));
    EXPECT_NEAR(c.mz, -1.0, 1e-12);
    EXPECT_NEAR(c.sxx, 0.0, 1e-12);
    EXPECT_NEAR(c.syy, 0.0, 1e-12);
    EXPECT_NEAR(c.szz, 1.0, 1e-12);
  }
}

TEST(CorrelatorSet, NearestNeighbourIsSingleEntry) {
  const CorrelatorSet c = correlator_set(ModelPoint::xy(0.7, 0.7, 1));
  EXPECT_NEAR(c.sxx, test::oracle_g(-1, 0.7, 0.7), 1e-9);
  EXPECT_NEAR(c.syy, test::oracle_g(1, 0.7, 0.7), 1e-9);
  EXPECT_NEAR(c.sxx, g_coefficient(-1, 0.7, 0.7), 1e-12);
}

TEST(CorrelatorSet, SecondNeighbourCofactorExpansion) {
  const double gm2 = g_coefficient(-2, 0.7, 0.7);
  const double gm1 = g_coefficient(-1, 0.7, 0.7);
  const double g0 = g_coefficient(0, 0.7, 0.7);
  const double g1 = g_coefficient(1, 0.7, 0.7);
  const double g2 = g_coefficient(2, 0.7, 0.7);
  const CorrelatorSet c = correlator_set(ModelPoint::xy(0.7, 0.7, 2));
  EXPECT_NEAR(c.sxx, test::det2(gm1, gm2, g0, gm1), 1e-12);
  EXPECT_NEAR(c.sxx, gm1 * gm1 - gm2 * g0, 1e-12);
  EXPECT_NEAR(c.syy, test::det2(g1, g0, g2, g1), 1e-12);
  EXPECT_NEAR(c.szz, c.mz * c.mz - g2 * gm2, 1e-12);
}

TEST(CorrelatorSet, RejectsTableModelsAndLargeSeparations) {
  EXPECT_EQ(kind_of([] { correlator_set(ModelPoint::xxz(0.5)); }),
            ErrorKind::UnsupportedModel);
  EXPECT_EQ(kind_of([] { correlator_set(ModelPoint::external()); }),
            ErrorKind::UnsupportedModel);
  EXPECT_EQ(kind_of([] { correlator_set(ModelPoint::xy(0.5, 0.5, kMaxSeparation + 1)); }),
            ErrorKind::SizeLimit);
  EXPECT_NO_THROW(correlator_set(ModelPoint::xy(0.5, 0.5, kMaxSeparation)));
}

TEST(CorrelatorSet, QuadratureFailureSurfaces) {
  QuadratureConfig q;
  q.abs_tol = 1e-16;
  q.rel_tol = 1e-16;
  q.max_subdivisions = 1;
  EXPECT_EQ(kind_of([&] { correlator_set(ModelPoint::xy(0.99, 0.2, 1), q); }),
            ErrorKind::QuadratureFailure);
}

TEST(ModelPoint, Validation) {
  EXPECT_EQ(kind_of([] { ModelPoint::xy(-0.1, 0.5); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { ModelPoint::xy(0.5, 1.1); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { ModelPoint::xy(0.5, 0.5, 0); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { ModelPoint::xy(std::nan(""), 0.5); }), ErrorKind::Validation);
}

TEST(ModelPoint, IsingForcesUnitAnisotropy) {
  EXPECT_EQ(ModelPoint::tim(0.3).gamma, 1.0);
  EXPECT_EQ(ModelPoint::tim(0.3, 1, -1.0).gamma, -1.0);
  ModelPoint p = ModelPoint::tim(0.3);
  p.gamma = 0.5;
  EXPECT_EQ(kind_of([&] { p.validate(); }), ErrorKind::Validation);
}

TEST(ModelKind, ParseRoundTrip) {
  for (ModelKind k : {ModelKind::XY, ModelKind::TIM, ModelKind::XXZ, ModelKind::External}) {
    EXPECT_EQ(parse_model_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_model_kind("XXZ"), ModelKind::XXZ);
  EXPECT_THROW(parse_model_kind("heisenberg"), Error);
}

TEST(CorrelatorSetValidate, NamesField) {
  CorrelatorSet c{0.0, 0.1, 0.1, 1.5};
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RangeError);
    EXPECT_NE(std::string(e.what()).find("szz"), std::string::npos);
  }
}

}  // namespace
}  // namespace qcorr
