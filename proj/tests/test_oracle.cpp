#include <gtest/gtest.h>

#include <algorithm>

#include "qcorr/error.hpp"
#include "qcorr/oracle.hpp"

namespace qcorr {
namespace {

const OracleCheck& check(const OracleReport& r, const std::string& name) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                               [&](const OracleCheck& c) { return c.name == name; });
  if (it == r.checks.end()) throw std::runtime_error("missing check " + name);
  return *it;
}

TEST(OracleSuite, DefaultRunPasses) {
  const OracleReport r = run_oracle_suite();
  ASSERT_EQ(r.checks.size(), 6u);
  for (const OracleCheck& c : r.checks) {
    EXPECT_TRUE(c.passed) << c.name << " max=" << c.max_deviation
                          << " median=" << c.median_deviation;
  }
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(check(r, "coefficient-map").samples, 27000u);
  EXPECT_EQ(check(r, "completeness").samples, 404u);
  // Anything above 1e-6 is reported, nothing below is.
  for (const OracleDiscrepancy& d : r.discrepancies) EXPECT_GT(d.deviation, 1e-6);
}

TEST(OracleSuite, OtherSeedsStayWithinTolerance) {
  for (std::uint64_t seed : {1ull, 99ull, 123456789ull}) {
    OracleOptions o;
    o.seed = seed;
    o.n_states = 300;
    EXPECT_TRUE(run_oracle_suite(o).passed()) << seed;
  }
}

TEST(OracleSuite, Deterministic) {
  OracleOptions o;
  o.n_states = 100;
  const OracleReport a = run_oracle_suite(o);
  const OracleReport b = run_oracle_suite(o);
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].max_deviation, b.checks[i].max_deviation);
    EXPECT_EQ(a.checks[i].median_deviation, b.checks[i].median_deviation);
  }
}

TEST(OracleSuite, InjectedFaultsAreCaught) {
  const std::pair<OracleFault, const char*> cases[] = {
      {OracleFault::CoefficientMap, "coefficient-map"},
      {OracleFault::Spectrum, "spectrum"},
      {OracleFault::AnalyticDiscord, "discord"},
      {OracleFault::Completeness, "completeness"},
  };
  for (const auto& [fault, name] : cases) {
    OracleOptions o;
    o.n_states = 50;
    o.fault = fault;
    const OracleReport r = run_oracle_suite(o);
    EXPECT_FALSE(r.passed()) << name;
    EXPECT_FALSE(check(r, name).passed) << name;
  }
}

TEST(OracleSuite, FaultNames) {
  EXPECT_EQ(parse_oracle_fault("spectrum"), OracleFault::Spectrum);
  EXPECT_EQ(parse_oracle_fault(to_string(OracleFault::AnalyticDiscord)),
            OracleFault::AnalyticDiscord);
  EXPECT_THROW(parse_oracle_fault("bogus"), Error);
}

TEST(OracleSuite, RejectsEmptyRun) {
  OracleOptions o;
  o.n_states = 0;
  EXPECT_THROW(run_oracle_suite(o), Error);
}

}  // namespace
}  // namespace qcorr
