#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "qcorr/channels.hpp"
#include "qcorr/correlator_table.hpp"
#include "qcorr/correlators.hpp"
#include "qcorr/dynamics.hpp"
#include "qcorr/error.hpp"
#include "qcorr/number_format.hpp"
#include "qcorr/oracle.hpp"

namespace qcorr::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Format { Csv, Json };

struct CommonOptions {
  std::string format = "csv";
  std::string output;
};

struct QuadOptions {
  double abs_tol = QuadratureConfig{}.abs_tol;
  double rel_tol = QuadratureConfig{}.rel_tol;

  QuadratureConfig config() const {
    QuadratureConfig q;
    q.abs_tol = abs_tol;
    q.rel_tol = rel_tol;
    q.validate();
    return q;
  }
};

struct CorrelatorsOptions {
  std::string model = "xy";
  std::vector<double> lambda{0.5};
  std::vector<double> gamma{1.0};
  std::vector<int> r{1};
  QuadOptions quad;
};

struct TrajectoryOptions {
  std::string model = "xy";
  double lambda = 0.5;
  double gamma = 1.0;
  int r = 1;
  std::string channel = "PF";
  double p_max = kDefaultPMax;
  std::size_t points = kDefaultPPoints;
  std::string table;
  std::optional<double> delta;
  std::size_t search_samples = SearchInterval{}.samples;
  QuadOptions quad;
};

struct ScanOptions {
  std::string parameter = "lambda";
  std::string channel = "PF";
  std::optional<double> from;
  std::optional<double> to;
  double step = 0.01;
  double lambda = 0.5;
  double gamma = 1.0;
  int r = 1;
  std::string table;
  bool keep_critical = false;
  std::optional<double> critical;
  int divergence_offset = 10;
  double divergence_factor = 2.0;
  int monotone_window = 5;
  std::size_t search_samples = SearchInterval{}.samples;
  QuadOptions quad;
};

struct OracleCliOptions {
  std::uint64_t seed = OracleOptions{}.seed;
  std::size_t states = OracleOptions{}.n_states;
  std::string fault = "none";
};

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw Error(ErrorKind::Validation, "unknown output format '" + text + "'");
}

json number_or_null(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string csv_field(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

void add_quad_options(CLI::App* cmd, QuadOptions& q) {
  cmd->add_option("--abs-tol", q.abs_tol, "Quadrature absolute tolerance");
  cmd->add_option("--rel-tol", q.rel_tol, "Quadrature relative tolerance");
}

ModelPoint make_point(const std::string& model, double lambda, double gamma, int r) {
  const ModelKind kind = parse_model_kind(model);
  ModelPoint point;
  switch (kind) {
    case ModelKind::XY: point = ModelPoint::xy(lambda, gamma, r); break;
    case ModelKind::TIM:
      point = ModelPoint::tim(lambda, r, gamma < 0.0 ? -1.0 : 1.0);
      break;
    default:
      throw Error(ErrorKind::UnsupportedModel,
                  "model '" + model + "' has no exact correlators; use --table");
  }
  point.validate();
  return point;
}

std::vector<double> stepped_grid(double from, double to, double step) {
  if (!(step > 0.0) || !(to >= from)) {
    throw Error(ErrorKind::Validation, "grid needs step > 0 and to >= from");
  }
  const double span = (to - from) / step;
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  if (n > 1000000) throw Error(ErrorKind::Validation, "grid has too many points");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Snap to 12 decimals so 0.5 + 49 * 0.01 prints and compares as 0.99.
    grid[i] = std::round((from + step * static_cast<double>(i)) * 1e12) / 1e12;
  }
  return grid;
}

const CorrelatorRow& find_xxz_row(std::span<const CorrelatorRow> rows, double delta,
                                  int r) {
  for (const CorrelatorRow& row : rows) {
    if (row.point.kind == ModelKind::XXZ && row.point.r == r &&
        std::abs(row.point.delta - delta) <= 1e-12) {
      return row;
    }
  }
  std::ostringstream msg;
  msg << "table has no XXZ row with delta = " << format_number(delta)
      << " and r = " << r;
  throw Error(ErrorKind::Validation, msg.str());
}

void run_correlators(const CorrelatorsOptions& o, Format format, std::ostream& out) {
  const QuadratureConfig quad = o.quad.config();
  std::vector<ModelPoint> points;
  for (double lambda : o.lambda)
    for (double gamma : o.gamma)
      for (int r : o.r) points.push_back(make_point(o.model, lambda, gamma, r));

  std::vector<CorrelatorRow> rows;
  rows.reserve(points.size());
  for (const ModelPoint& p : points) rows.push_back({p, correlator_set(p, quad), 0});

  if (format == Format::Csv) {
    write_correlator_table(out, rows);
    return;
  }
  json doc;
  doc["command"] = "correlators";
  doc["config"] = {{"model", o.model}, {"lambda", o.lambda}, {"gamma", o.gamma},
                   {"r", o.r}, {"abs_tol", o.quad.abs_tol},
                   {"rel_tol", o.quad.rel_tol}};
  json& jrows = doc["rows"] = json::array();
  for (const CorrelatorRow& row : rows) {
    jrows.push_back({{"kind", std::string(to_string(row.point.kind))},
                     {"lambda", row.point.lambda},
                     {"gamma", row.point.gamma},
                     {"r", row.point.r},
                     {"mz", row.values.mz},
                     {"sxx", row.values.sxx},
                     {"syy", row.values.syy},
                     {"szz", row.values.szz}});
  }
  doc["footer"] = {{"rows", rows.size()}};
  out << doc.dump(2) << '\n';
}

void run_trajectory(const TrajectoryOptions& o, Format format, std::ostream& out,
                    std::ostream& err) {
  const ChannelKind channel = parse_channel_kind(o.channel);
  if (!(o.p_max > 0.0 && o.p_max < 1.0) || o.points < 2) {
    throw Error(ErrorKind::Validation, "need 0 < p-max < 1 and points >= 2");
  }
  const QuadratureConfig quad = o.quad.config();

  XState initial;
  std::optional<ModelPoint> point;
  if (!o.table.empty()) {
    if (!o.delta) throw Error(ErrorKind::Validation, "--table needs --delta");
    const auto rows = load_correlator_table(o.table);
    const CorrelatorRow& row = find_xxz_row(rows, *o.delta, o.r);
    initial = from_correlators(row.values);
    point = row.point;
  } else {
    point = make_point(o.model, o.lambda, o.gamma, o.r);
    initial = initial_state(*point, quad);
  }

  const std::vector<double> grid = uniform_grid(0.0, o.p_max, o.points);
  Trajectory traj = trajectory(initial, channel, grid);
  traj.model = point;
  SearchInterval search;
  search.hi = o.p_max;
  search.samples = o.search_samples;
  const SuddenChange sc = detect_p_sc(initial, channel, search);
  std::optional<std::string> type;
  if (traj.size() >= 50) {
    try {
      type = std::string(to_string(classify(traj)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unclassifiable) throw;
    }
  }
  const auto interval = q_exceeds_c_interval(traj);

  if (format == Format::Csv) {
    out << "p,mutual,classical,discord,branch\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const CorrelationTriple& t = traj.triples[i];
      out << format_number(traj.p_grid[i]) << ',' << format_number(t.mutual) << ','
          << format_number(t.classical) << ',' << format_number(t.discord) << ','
          << to_string(traj.branches[i]) << '\n';
    }
    err << "# p_sc=" << csv_field(sc.p_sc) << " method="
        << (sc ? to_string(sc.method) : "none")
        << " type=" << type.value_or("unclassified") << '\n';
    return;
  }
  json doc;
  doc["command"] = "trajectory";
  doc["config"] = {{"model", point ? std::string(to_string(point->kind)) : o.model},
                   {"lambda", point->lambda},
                   {"gamma", point->gamma},
                   {"delta", point->delta},
                   {"r", o.r},
                   {"channel", std::string(to_string(channel))},
                   {"p_max", o.p_max},
                   {"points", o.points}};
  json& jrows = doc["rows"] = json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const CorrelationTriple& t = traj.triples[i];
    jrows.push_back({{"p", traj.p_grid[i]},
                     {"mutual", t.mutual},
                     {"classical", t.classical},
                     {"discord", t.discord},
                     {"branch", std::string(to_string(traj.branches[i]))}});
  }
  json footer;
  footer["p_sc"] = number_or_null(sc.p_sc);
  footer["p_sc_method"] = sc ? json(std::string(to_string(sc.method))) : json(nullptr);
  footer["dynamics_type"] = type ? json(*type) : json(nullptr);
  footer["discord_exceeds_classical"] =
      interval ? json{{"begin", interval->begin}, {"end", interval->end}}
               : json(nullptr);
  doc["footer"] = footer;
  out << doc.dump(2) << '\n';
}

void run_scan(const ScanOptions& o, Format format, std::ostream& out,
              std::ostream& err) {
  ScanRequest request;
  request.parameter = parse_scan_parameter(o.parameter);
  request.channel = parse_channel_kind(o.channel);
  request.lambda = o.lambda;
  request.gamma = o.gamma;
  request.r = o.r;
  request.keep_critical_points = o.keep_critical;
  request.critical_value = o.critical;
  request.divergence_offset = o.divergence_offset;
  request.divergence_factor = o.divergence_factor;
  request.monotone_window = o.monotone_window;
  request.search.samples = o.search_samples;
  request.quad = o.quad.config();
  if (o.divergence_offset < 1 || o.monotone_window < 2 || !(o.divergence_factor > 0.0)) {
    throw Error(ErrorKind::Validation,
                "divergence offset >= 1, window >= 2 and factor > 0 required");
  }

  std::vector<CorrelatorRow> table;
  if (request.parameter == ScanParameter::Delta) {
    if (o.table.empty()) throw Error(ErrorKind::Validation, "delta scans need --table");
    table = load_correlator_table(o.table);
    request.table = table;
    if (o.from || o.to) {
      if (!o.from || !o.to) {
        throw Error(ErrorKind::Validation, "--from and --to go together");
      }
      request.grid = stepped_grid(*o.from, *o.to, o.step);
    }
  } else {
    if (!o.from || !o.to) throw Error(ErrorKind::Validation, "scan needs --from and --to");
    request.grid = stepped_grid(*o.from, *o.to, o.step);
    // Validate every point before any quadrature runs.
    for (double v : request.grid) {
      const double lambda = request.parameter == ScanParameter::Lambda ? v : o.lambda;
      const double gamma = request.parameter == ScanParameter::Gamma ? v : o.gamma;
      ModelPoint::xy(lambda, gamma, o.r).validate();
    }
  }

  const CriticalScan result = scan(request);
  const std::string name(to_string(result.parameter));
  const DivergenceIndicator& div = result.divergence;

  std::ostringstream summary;
  summary << "# divergence indicator: evaluable=" << (div.evaluable ? "yes" : "no");
  if (div.evaluable) {
    summary << " fired=" << (div.fired ? "yes" : "no") << " near=" << div.near_parameter
            << " far=" << div.far_parameter << " ratio=" << div.ratio
            << " monotone_tail=" << (div.monotone_tail ? "yes" : "no");
  }
  err << summary.str() << '\n';

  if (format == Format::Csv) {
    out << name << ",p_sc,dp_sc_d" << name << '\n';
    for (std::size_t i = 0; i < result.grid.size(); ++i) {
      out << format_number(result.grid[i]) << ',' << csv_field(result.p_sc[i]) << ','
          << csv_field(result.derivative[i]) << '\n';
    }
    return;
  }
  json doc;
  doc["command"] = "scan";
  doc["config"] = {{"parameter", name},
                   {"channel", std::string(to_string(result.channel))},
                   {"lambda", o.lambda},
                   {"gamma", o.gamma},
                   {"r", o.r},
                   {"critical_value", result.critical_value},
                   {"divergence_offset", o.divergence_offset},
                   {"divergence_factor", o.divergence_factor},
                   {"monotone_window", o.monotone_window}};
  json& jrows = doc["rows"] = json::array();
  for (std::size_t i = 0; i < result.grid.size(); ++i) {
    jrows.push_back({{name, result.grid[i]},
                     {"p_sc", number_or_null(result.p_sc[i])},
                     {"dp_sc_d" + name, number_or_null(result.derivative[i])}});
  }
  json jdiv = {{"evaluable", div.evaluable}};
  if (div.evaluable) {
    jdiv["fired"] = div.fired;
    jdiv["near_parameter"] = div.near_parameter;
    jdiv["far_parameter"] = div.far_parameter;
    jdiv["near_derivative"] = div.near_derivative;
    jdiv["far_derivative"] = div.far_derivative;
    jdiv["ratio"] = div.ratio;
    jdiv["monotone_tail"] = div.monotone_tail;
  }
  doc["footer"] = {{"divergence_indicator", jdiv}};
  out << doc.dump(2) << '\n';
}

bool run_oracle(const OracleCliOptions& o, Format format, std::ostream& out) {
  OracleOptions options;
  options.seed = o.seed;
  options.n_states = o.states;
  options.fault = parse_oracle_fault(o.fault);
  const OracleReport report = run_oracle_suite(options);

  if (format == Format::Csv) {
    out << "check,samples,max_deviation,median_deviation,max_tolerance,"
           "median_tolerance,passed\n";
    for (const OracleCheck& c : report.checks) {
      out << c.name << ',' << c.samples << ',' << format_number(c.max_deviation) << ','
          << format_number(c.median_deviation) << ',' << format_number(c.max_tolerance)
          << ',' << (c.median_tolerance < 0.0 ? "" : format_number(c.median_tolerance))
          << ',' << (c.passed ? "yes" : "no") << '\n';
    }
    for (const OracleDiscrepancy& d : report.discrepancies) {
      out << "# discrepancy " << d.check << " index=" << d.index
          << " deviation=" << format_number(d.deviation) << '\n';
    }
    return report.passed();
  }
  json doc;
  doc["command"] = "oracle";
  doc["config"] = {{"seed", o.seed}, {"states", o.states}};
  json& jrows = doc["rows"] = json::array();
  for (const OracleCheck& c : report.checks) {
    jrows.push_back({{"check", c.name},
                     {"samples", c.samples},
                     {"max_deviation", c.max_deviation},
                     {"median_deviation", c.median_deviation},
                     {"max_tolerance", c.max_tolerance},
                     {"median_tolerance", c.median_tolerance < 0.0
                                              ? json(nullptr)
                                              : json(c.median_tolerance)},
                     {"passed", c.passed}});
  }
  json jd = json::array();
  for (const OracleDiscrepancy& d : report.discrepancies) {
    jd.push_back({{"check", d.check}, {"index", d.index}, {"deviation", d.deviation}});
  }
  doc["footer"] = {{"passed", report.passed()}, {"discrepancies", jd}};
  out << doc.dump(2) << '\n';
  return report.passed();
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::QuadratureFailure: return kExitQuadrature;
    case ErrorKind::InsufficientData: return kExitInsufficientData;
    default: return kExitValidation;
  }
}

void error_record(std::ostream& err, std::string_view kind, std::string_view message) {
  json rec = {{"error", std::string(kind)}, {"message", std::string(message)}};
  err << rec.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlations of spin-chain X states under local decoherence", "qcorr"};
  app.set_config("--config", "", "TOML config file; flags override its values");
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", common.output, "Write results to this file");

  CorrelatorsOptions corr;
  auto* c_cmd = app.add_subcommand("correlators", "Magnetization and correlators");
  c_cmd->add_option("--model", corr.model, "xy or tim");
  c_cmd->add_option("--lambda", corr.lambda, "One or more lambda values");
  c_cmd->add_option("--gamma", corr.gamma, "One or more gamma values");
  c_cmd->add_option("--r", corr.r, "One or more separations");
  add_quad_options(c_cmd, corr.quad);

  TrajectoryOptions traj;
  auto* t_cmd = app.add_subcommand("trajectory", "I, C and Q along parametrized time");
  t_cmd->add_option("--model", traj.model, "xy or tim");
  t_cmd->add_option("--lambda", traj.lambda);
  t_cmd->add_option("--gamma", traj.gamma);
  t_cmd->add_option("--r", traj.r);
  t_cmd->add_option("--channel", traj.channel, "AD, PF, BF or BPF");
  t_cmd->add_option("--p-max", traj.p_max);
  t_cmd->add_option("--points", traj.points);
  t_cmd->add_option("--table", traj.table, "Correlator table for XXZ points");
  t_cmd->add_option("--delta", traj.delta, "XXZ row to use from --table");
  t_cmd->add_option("--search-samples", traj.search_samples);
  add_quad_options(t_cmd, traj.quad);

  ScanOptions sc;
  auto* s_cmd = app.add_subcommand("scan", "Sudden-change time over a parameter grid");
  s_cmd->add_option("--param", sc.parameter, "lambda, gamma or delta");
  s_cmd->add_option("--channel", sc.channel, "AD, PF, BF or BPF");
  s_cmd->add_option("--from", sc.from);
  s_cmd->add_option("--to", sc.to);
  s_cmd->add_option("--step", sc.step);
  s_cmd->add_option("--lambda", sc.lambda, "Fixed lambda for gamma scans");
  s_cmd->add_option("--gamma", sc.gamma, "Fixed gamma for lambda scans");
  s_cmd->add_option("--r", sc.r);
  s_cmd->add_option("--table", sc.table, "Correlator table (delta scans)");
  s_cmd->add_flag("--keep-critical", sc.keep_critical, "Keep exact critical points");
  s_cmd->add_option("--critical", sc.critical, "Critical value for the indicator");
  s_cmd->add_option("--divergence-offset", sc.divergence_offset);
  s_cmd->add_option("--divergence-factor", sc.divergence_factor);
  s_cmd->add_option("--monotone-window", sc.monotone_window);
  s_cmd->add_option("--search-samples", sc.search_samples);
  add_quad_options(s_cmd, sc.quad);

  OracleCliOptions orc;
  auto* o_cmd = app.add_subcommand("oracle", "Run the verification oracles");
  o_cmd->add_option("--seed", orc.seed);
  o_cmd->add_option("--states", orc.states);
  o_cmd->add_option("--inject-fault", orc.fault)->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error_record(err, "parse-error", e.what());
    return kExitValidation;
  }

  // Results are buffered so a failing command leaves no partial rows.
  std::ostringstream buffer;
  try {
    const Format format = parse_format(common.format);
    int code = kExitOk;
    if (*c_cmd) {
      run_correlators(corr, format, buffer);
    } else if (*t_cmd) {
      run_trajectory(traj, format, buffer, err);
    } else if (*s_cmd) {
      run_scan(sc, format, buffer, err);
    } else if (*o_cmd) {
      if (!run_oracle(orc, format, buffer)) code = kExitOracleFailure;
    }
    if (common.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(common.output, std::ios::binary);
      if (!file) {
        error_record(err, "validation", "cannot open output file " + common.output);
        return kExitValidation;
      }
      file << buffer.str();
    }
    if (code == kExitOracleFailure) {
      error_record(err, "oracle-failure", "one or more oracle tolerances violated");
    }
    return code;
  } catch (const Error& e) {
    error_record(err, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    error_record(err, "internal", e.what());
    return kExitValidation;
  }
}

}  // namespace qcorr::cli
