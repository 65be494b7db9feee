#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "qcorr/correlator_table.hpp"
#include "qcorr/correlators.hpp"
#include "qcorr/number_format.hpp"

namespace qcorr {
namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

double num(const std::string& s) {
  double v = 0.0;
  EXPECT_TRUE(parse_number(s, v)) << s;
  return v;
}

void expect_error_record(const CliRun& r, int code) {
  EXPECT_EQ(r.code, code);
  EXPECT_TRUE(r.out.empty()) << r.out;
  // Exactly one line, and it parses as JSON with an error field.
  ASSERT_FALSE(r.err.empty());
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1) << r.err;
  const auto rec = nlohmann::json::parse(r.err);
  EXPECT_TRUE(rec.contains("error"));
  EXPECT_TRUE(rec.contains("message"));
}

std::string table_path() { return std::string(QCORR_TEST_DATA_DIR) + "/xxz_nn.csv"; }

TEST(Cli, CorrelatorsFieldDominated) {
  const CliRun r = run({"correlators", "--lambda", "0", "--gamma", "0.7", "--r", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto rows = load_correlator_table(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].values.mz, -1.0, 1e-12);
  EXPECT_NEAR(rows[0].values.szz, 1.0, 1e-12);
  EXPECT_NEAR(rows[0].values.sxx, 0.0, 1e-12);
  EXPECT_NEAR(rows[0].values.syy, 0.0, 1e-12);
}

TEST(Cli, CorrelatorsMatchLibraryBitForBit) {
  const CliRun r = run({"correlators", "--lambda", "0.7", "--gamma", "0.7", "--r", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto rows = load_correlator_table(in);
  ASSERT_EQ(rows.size(), 1u);
  const CorrelatorSet lib = correlator_set(ModelPoint::xy(0.7, 0.7, 2));
  EXPECT_EQ(rows[0].values.mz, lib.mz);
  EXPECT_EQ(rows[0].values.sxx, lib.sxx);
  EXPECT_EQ(rows[0].values.syy, lib.syy);
  EXPECT_EQ(rows[0].values.szz, lib.szz);
}

TEST(Cli, CorrelatorsGrid) {
  const CliRun r = run({"correlators", "--lambda", "0.2", "0.4", "--gamma", "0.5", "--r", "1",
                     "2", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  EXPECT_EQ(load_correlator_table(in).size(), 6u);
}

TEST(Cli, MalformedValueExitsTwo) {
  expect_error_record(run({"correlators", "--lambda", "abc"}), 2);
  expect_error_record(run({"correlators", "--lambda", "-1"}), 2);
  expect_error_record(run({"correlators", "--r", "17"}), 2);
  expect_error_record(run({"trajectory", "--channel", "XX"}), 2);
  expect_error_record(run({"bogus"}), 2);
  expect_error_record(run({}), 2);
}

TEST(Cli, QuadratureFailureExitsThree) {
  expect_error_record(
      run({"correlators", "--lambda", "0.99", "--abs-tol", "1e-300", "--rel-tol", "1e-300"}),
      3);
}

TEST(Cli, Help) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("trajectory"), std::string::npos);
}

TEST(Cli, TrajectoryBitPhaseFlip) {
  const CliRun r = run({"trajectory", "--channel", "BPF", "--lambda", "0.7", "--gamma", "0.7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1002u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"p", "mutual", "classical", "discord", "branch"}));
  EXPECT_EQ(num(rows[1][0]), 0.0);
  EXPECT_EQ(num(rows.back()[0]), 0.999);
  EXPECT_NE(r.err.find("p_sc=0.11"), std::string::npos) << r.err;
}

TEST(Cli, TrajectoryAmplitudeDampingDecays) {
  const CliRun r = run({"trajectory", "--channel", "AD", "--lambda", "0.5", "--gamma", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  for (int k = 1; k <= 3; ++k) EXPECT_LT(num(rows.back()[k]), 1e-3);
}

TEST(Cli, TrajectoryPhaseFlipDiscordExceedsClassical) {
  const CliRun r = run({"trajectory", "--channel", "PF", "--lambda", "0.5", "--gamma", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  int exceeding = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (num(rows[i][3]) > num(rows[i][2])) ++exceeding;
  }
  EXPECT_GT(exceeding, 0);
}

TEST(Cli, TrajectoryJson) {
  const CliRun r = run({"trajectory", "--channel", "PF", "--lambda", "0.5", "--gamma", "1",
                     "--points", "101", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["config"]["channel"], "PF");
  EXPECT_EQ(doc["rows"].size(), 101u);
  EXPECT_EQ(doc["footer"]["dynamics_type"], "TypeII");
  EXPECT_TRUE(doc["footer"]["p_sc"].is_number());
}

TEST(Cli, TrajectoryFromTable) {
  const CliRun r = run({"trajectory", "--channel", "PF", "--table", table_path(), "--delta", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(csv_rows(r.out).size(), 1002u);
  expect_error_record(
      run({"trajectory", "--channel", "PF", "--table", table_path(), "--delta", "0.123"}), 2);
}

TEST(Cli, ScanLambda) {
  const CliRun r = run({"scan", "--param", "lambda", "--from", "0.5", "--to", "0.99", "--step",
                     "0.01", "--channel", "BPF", "--gamma", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"lambda", "p_sc", "dp_sc_dlambda"}));
  EXPECT_EQ(num(rows.back()[0]), 0.99);
  // Derivative magnitude grows over the tail.
  for (std::size_t i = rows.size() - 5; i < rows.size(); ++i) {
    EXPECT_GT(std::abs(num(rows[i][2])), std::abs(num(rows[i - 1][2])));
  }
  EXPECT_NE(r.err.find("fired=yes"), std::string::npos) << r.err;
}

TEST(Cli, ScanEmptyFieldsForAbsentValues) {
  const CliRun r = run({"scan", "--param", "gamma", "--from", "-0.5", "--to", "0.5", "--step",
                     "0.1", "--channel", "BPF"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 11u);  // gamma = 0 dropped
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool positive = num(rows[i][0]) > 0.0;
    EXPECT_EQ(!rows[i][1].empty(), positive) << rows[i][0];
  }
}

TEST(Cli, ScanDeltaNeedsTable) {
  expect_error_record(run({"scan", "--param", "delta", "--channel", "PF"}), 2);
  const CliRun r = run({"scan", "--param", "delta", "--channel", "PF", "--table", table_path(),
                     "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  for (const auto& row : doc["rows"]) {
    const double delta = row["delta"];
    EXPECT_EQ(row["p_sc"].is_number(), delta > -1.0 && delta < 1.0) << delta;
  }
  EXPECT_TRUE(doc["footer"]["divergence_indicator"]["fired"].get<bool>());
}

TEST(Cli, ScanInsufficientDataExitsFour) {
  expect_error_record(run({"scan", "--param", "gamma", "--from", "0.2", "--to", "0.8",
                           "--step", "0.2", "--channel", "BF"}),
                      4);
}

TEST(Cli, OracleExitCodes) {
  const CliRun ok = run({"oracle", "--states", "100"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(ok.out.find("coefficient-map"), std::string::npos);
  const CliRun bad = run({"oracle", "--states", "50", "--inject-fault", "discord"});
  EXPECT_EQ(bad.code, 5);
  EXPECT_FALSE(bad.out.empty());
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args{"scan", "--param", "lambda", "--from", "0.6", "--to",
                                      "0.8", "--channel", "PF", "--format", "json"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> traj{"trajectory", "--channel", "AD", "--lambda", "1.3"};
  EXPECT_EQ(run(traj).out, run(traj).out);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto path = std::filesystem::temp_directory_path() / "qcorr_cli_test.toml";
  {
    std::ofstream f(path);
    f << "[trajectory]\nchannel = \"BPF\"\nlambda = 0.7\ngamma = 0.7\npoints = 60\n";
  }
  const CliRun from_file = run({"--config", path.string(), "trajectory"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(csv_rows(from_file.out).size(), 61u);
  EXPECT_NE(from_file.err.find("p_sc=0.11"), std::string::npos) << from_file.err;

  const CliRun overridden = run({"--config", path.string(), "trajectory", "--gamma", "-0.7"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_NE(overridden.err.find("p_sc= "), std::string::npos) << overridden.err;
  std::filesystem::remove(path);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "qcorr_cli_out.csv";
  const CliRun r = run({"correlators", "--lambda", "0.3", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(load_correlator_table(path).size(), 1u);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace qcorr
