#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "qcorr/error.hpp"
#include "qcorr/measures.hpp"
#include "support/oracles.hpp"

namespace qcorr {
namespace {

const XState kBell = XState::bell();
const XState kMixed = XState::maximally_mixed();
const XState kProduct{1.0, 0.0, 0.0, 0.0, 0.0};
const XState kClassical{0.5, 0.0, 0.5, 0.0, 0.0};

TEST(Entropy, Examples) {
  EXPECT_EQ(entropy_bits(std::array{1.0, 0.0, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(entropy_bits(std::array{0.25, 0.25, 0.25, 0.25}), 2.0, 1e-15);
  EXPECT_NEAR(entropy_bits(std::array{0.5, 0.5}), 1.0, 1e-15);
}

TEST(Entropy, TinyNegativesClampButLargeOnesThrow) {
  EXPECT_NEAR(entropy_bits(std::array{1.0, -5e-13}), 0.0, 1e-15);
  try {
    entropy_bits(std::array{1.0, -1e-9});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeProbability);
  }
}

TEST(MutualInformation, Examples) {
  EXPECT_NEAR(mutual_information(kBell), 2.0, 1e-14);
  EXPECT_NEAR(mutual_information(kMixed), 0.0, 1e-14);
  EXPECT_NEAR(mutual_information(kProduct), 0.0, 1e-14);
}

TEST(MutualInformation, DiagonalStatesMatchShannon) {
  // For z = f = 0 the state is classical, so I is the Shannon mutual
  // information of the joint distribution (a, b, b, d).
  const XState x{0.4, 0.15, 0.3, 0.0, 0.0};
  const double pa0 = x.a + x.b;
  const double expected = 2.0 * test::shannon_bits({pa0, 1.0 - pa0}) -
                          test::shannon_bits({x.a, x.b, x.b, x.d});
  EXPECT_NEAR(mutual_information(x), expected, 1e-14);
}

TEST(DiscordAnalytic, Examples) {
  const AnalyticDiscord bell = discord_analytic(kBell);
  EXPECT_NEAR(bell.discord, 1.0, 1e-14);
  EXPECT_EQ(bell.branch, DiscordBranch::Q2);  // Q1 and Q2 tie here
  EXPECT_NEAR(discord_analytic(kProduct).discord, 0.0, 1e-14);
  EXPECT_NEAR(discord_analytic(kMixed).discord, 0.0, 1e-14);
}

TEST(DiscordAnalytic, ProductOfMixedQubits) {
  // rho_A x rho_B with both marginals diag(u, 1 - u).
  const double u = 0.3;
  const XState x{u * u, u * (1.0 - u), (1.0 - u) * (1.0 - u), 0.0, 0.0};
  EXPECT_NEAR(discord_analytic(x).discord, 0.0, 1e-14);
  EXPECT_NEAR(discord_numeric(x).discord, 0.0, 1e-9);
}

TEST(DiscordAnalytic, CandidatesAreConsistent) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    const AnalyticDiscord d = discord_analytic(random_xstate(rng));
    EXPECT_NEAR(std::min(d.q2_x, d.q2_y), d.q2, 1e-13);
    EXPECT_NEAR(std::min(d.q1, d.q2), d.discord, 1e-12);
    if (d.branch == DiscordBranch::Q1) EXPECT_EQ(d.axis, MeasurementAxis::Z);
  }
}

TEST(ConditionalEntropy, Examples) {
  EXPECT_NEAR(conditional_entropy_measured(kBell, {0.0, 0.0}), 0.0, 1e-14);
  for (const MeasurementBasis m :
       {MeasurementBasis{0.0, 0.0}, MeasurementBasis{1.1, 0.3}, MeasurementBasis{2.0, 2.5}}) {
    EXPECT_NEAR(conditional_entropy_measured(kMixed, m), 1.0, 1e-14);
  }
  EXPECT_NEAR(conditional_entropy_measured(kClassical, {0.0, 0.0}), 0.0, 1e-14);
}

TEST(ConditionalEntropy, AzimuthInvariantWithoutOuterCoherence) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 50; ++i) {
    XState x = random_xstate(rng);
    x.f = 0.0;
    const double ref = conditional_entropy_measured(x, {std::numbers::pi / 2.0, 0.0});
    for (double phi : {0.3, 1.0, 2.0, 4.0, 5.9}) {
      EXPECT_NEAR(conditional_entropy_measured(x, {std::numbers::pi / 2.0, phi}), ref, 1e-13);
    }
  }
}

TEST(DiscordNumeric, Examples) {
  EXPECT_NEAR(discord_numeric(kBell).discord, 1.0, 1e-9);
  EXPECT_NEAR(discord_numeric(kProduct).discord, 0.0, 1e-9);
}

TEST(DiscordNumeric, EnvelopeAndAgreement) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 200; ++i) {
    const XState x = random_xstate(rng);
    const double analytic = discord_analytic(x).discord;
    const double numeric = discord_numeric(x).discord;
    EXPECT_LE(numeric, analytic + 1e-9);
    EXPECT_NEAR(numeric, analytic, 1e-4);
  }
}

TEST(DiscordNumeric, RejectsDegenerateGrid) {
  NumericDiscordOptions o;
  o.theta_points = 1;
  EXPECT_THROW(discord_numeric(kBell, o), Error);
}

TEST(DiscordNumeric, DeterministicTieBreak) {
  // Every direction is optimal for the maximally mixed state; the grid keeps
  // the first cell.
  NumericDiscordOptions o;
  o.refine = false;
  const NumericDiscord d = discord_numeric(kMixed, o);
  EXPECT_EQ(d.basis.theta, 0.0);
  EXPECT_EQ(d.basis.phi, 0.0);
}

TEST(Triple, Examples) {
  const CorrelationTriple b = triple(kBell);
  EXPECT_NEAR(b.mutual, 2.0, 1e-14);
  EXPECT_NEAR(b.classical, 1.0, 1e-14);
  EXPECT_NEAR(b.discord, 1.0, 1e-14);
  const CorrelationTriple m = triple(kMixed);
  EXPECT_NEAR(m.mutual, 0.0, 1e-14);
  EXPECT_NEAR(m.classical, 0.0, 1e-14);
  EXPECT_NEAR(m.discord, 0.0, 1e-14);
}

TEST(Triple, NumericPathIsAdditiveAndNonNegative) {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 100; ++i) {
    const XState x = random_xstate(rng);
    const CorrelationTriple t = triple(x, DiscordMethod::Numeric);
    EXPECT_NEAR(t.classical + t.discord, t.mutual, 1e-9);
    const CorrelationTriple a = triple(x);
    for (double v : {t.mutual, t.classical, t.discord, a.mutual, a.classical, a.discord}) {
      EXPECT_GE(v, -1e-10);
      EXPECT_LE(v, 2.0 + 1e-10);
    }
  }
}

TEST(Triple, PureStatesSplitEvenly) {
  for (double t : {0.1, 0.4, 0.7, 1.2, 1.5}) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    for (const XState x : {XState{c * c, 0.0, s * s, 0.0, c * s},
                           XState{c * c, 0.0, s * s, 0.0, -c * s}}) {
      const CorrelationTriple tr = triple(x);
      EXPECT_NEAR(tr.classical, 0.5 * tr.mutual, 1e-9);
      EXPECT_NEAR(tr.discord, 0.5 * tr.mutual, 1e-9);
      const double h = test::shannon_bits({c * c, s * s});
      EXPECT_NEAR(tr.mutual, 2.0 * h, 1e-12);
    }
  }
}

}  // namespace
}  // namespace qcorr
