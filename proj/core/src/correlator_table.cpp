#include "qcorr/correlator_table.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "qcorr/error.hpp"
#include "qcorr/number_format.hpp"

namespace qcorr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(ErrorKind kind, std::size_t line, const std::string& what) {
  throw Error(kind, "line " + std::to_string(line) + ": " + what);
}

constexpr std::array<std::string_view, 9> kKnownColumns = {
    "kind", "lambda", "gamma", "delta", "r", "mz", "sxx", "syy", "szz"};
constexpr std::array<std::string_view, 6> kRequiredColumns = {
    "kind", "r", "mz", "sxx", "syy", "szz"};

class RowReader {
 public:
  RowReader(const std::vector<std::string>& header,
            std::vector<std::string_view> fields, std::size_t line)
      : line_(line) {
    if (fields.size() != header.size()) {
      fail(ErrorKind::ParseError, line,
           "expected " + std::to_string(header.size()) + " fields, found " +
               std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      std::string_view value = fields[i];
      const std::size_t eq = value.find('=');
      if (eq != std::string_view::npos) {
        const std::string_view name = trim(value.substr(0, eq));
        if (name != header[i]) {
          fail(ErrorKind::ParseError, line,
               "field '" + std::string(name) + "' in column '" + header[i] +
                   "'");
        }
        value = trim(value.substr(eq + 1));
      }
      cells_[header[i]] = value;
    }
  }

  std::string_view text(const std::string& column) const {
    const auto it = cells_.find(column);
    return it == cells_.end() ? std::string_view{} : it->second;
  }

  double number(const std::string& column) const {
    const std::string_view raw = text(column);
    if (raw.empty()) {
      fail(ErrorKind::ParseError, line_, "missing value for '" + column + "'");
    }
    double value = 0.0;
    if (!parse_number(raw, value)) {
      fail(ErrorKind::ParseError, line_,
           "'" + std::string(raw) + "' is not a number in column '" + column +
               "'");
    }
    return value;
  }

 private:
  std::map<std::string, std::string_view, std::less<>> cells_;
  std::size_t line_;
};

ModelPoint read_point(const RowReader& row, std::size_t line) {
  ModelPoint point;
  try {
    point.kind = parse_model_kind(row.text("kind"));
  } catch (const Error& e) {
    fail(ErrorKind::ParseError, line, e.what());
  }
  const double r = row.number("r");
  if (r != std::floor(r) || r < 1 || r > 1e6) {
    fail(ErrorKind::ParseError, line, "r must be a positive integer");
  }
  point.r = static_cast<int>(r);
  switch (point.kind) {
    case ModelKind::XY:
    case ModelKind::TIM:
      point.lambda = row.number("lambda");
      point.gamma = row.number("gamma");
      break;
    case ModelKind::XXZ:
      point.delta = row.number("delta");
      break;
    case ModelKind::External:
      break;
  }
  try {
    point.validate();
  } catch (const Error& e) {
    fail(ErrorKind::RangeError, line, e.what());
  }
  return point;
}

}  // namespace

std::vector<CorrelatorRow> load_correlator_table(std::istream& in) {
  std::vector<CorrelatorRow> rows;
  std::optional<std::vector<std::string>> header;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = trim(raw);
    if (line == 1 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    if (text.empty() || text.front() == '#') continue;

    auto fields = split_fields(text);
    if (!header) {
      header.emplace();
      for (std::string_view f : fields) {
        std::string name(f);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (std::find(kKnownColumns.begin(), kKnownColumns.end(), name) ==
            kKnownColumns.end()) {
          fail(ErrorKind::ParseError, line, "unknown column '" + name + "'");
        }
        if (std::find(header->begin(), header->end(), name) != header->end()) {
          fail(ErrorKind::ParseError, line, "duplicate column '" + name + "'");
        }
        header->push_back(std::move(name));
      }
      for (std::string_view required : kRequiredColumns) {
        if (std::find(header->begin(), header->end(), required) ==
            header->end()) {
          fail(ErrorKind::ParseError, line,
               "header lacks column '" + std::string(required) + "'");
        }
      }
      continue;
    }

    const RowReader reader(*header, std::move(fields), line);
    CorrelatorRow row;
    row.line = line;
    row.point = read_point(reader, line);
    row.values.mz = reader.number("mz");
    row.values.sxx = reader.number("sxx");
    row.values.syy = reader.number("syy");
    row.values.szz = reader.number("szz");
    try {
      row.values.validate();
    } catch (const Error& e) {
      fail(ErrorKind::RangeError, line, e.what());
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CorrelatorRow> load_correlator_table(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::ParseError,
                "cannot open correlator table '" + path.string() + "'");
  }
  return load_correlator_table(in);
}

void write_correlator_table(std::ostream& out,
                            std::span<const CorrelatorRow> rows) {
  const bool has_xy = std::any_of(rows.begin(), rows.end(), [](const auto& r) {
    return r.point.kind == ModelKind::XY || r.point.kind == ModelKind::TIM;
  });
  const bool has_xxz = std::any_of(rows.begin(), rows.end(), [](const auto& r) {
    return r.point.kind == ModelKind::XXZ;
  });

  out << "kind";
  if (has_xy) out << ",lambda,gamma";
  if (has_xxz) out << ",delta";
  out << ",r,mz,sxx,syy,szz\n";

  for (const CorrelatorRow& row : rows) {
    const bool xy = row.point.kind == ModelKind::XY ||
                    row.point.kind == ModelKind::TIM;
    out << to_string(row.point.kind);
    if (has_xy) {
      out << ',' << (xy ? format_number(row.point.lambda) : "") << ','
          << (xy ? format_number(row.point.gamma) : "");
    }
    if (has_xxz) {
      out << ','
          << (row.point.kind == ModelKind::XXZ ? format_number(row.point.delta)
                                               : "");
    }
    out << ',' << row.point.r << ',' << format_number(row.values.mz) << ','
        << format_number(row.values.sxx) << ',' << format_number(row.values.syy)
        << ',' << format_number(row.values.szz) << '\n';
  }
}

}  // namespace qcorr
