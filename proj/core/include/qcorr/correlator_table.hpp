#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "qcorr/correlators.hpp"

namespace qcorr {

struct CorrelatorRow {
  ModelPoint point;
  CorrelatorSet values;
  std::size_t line = 0;  // 1-based source line, 0 when not read from text
};

/// Reads a comma-separated correlator table.
///
/// Blank lines and lines starting with '#' are skipped. The first remaining
/// line is a header naming the columns; it must contain kind, r, mz, sxx,
/// syy and szz, and may contain lambda, gamma and delta. Each field of a data
/// row may be written bare or as "column=value", in which case the name must
/// match the header column at that position. An empty input yields no rows.
///
/// Throws Error{ParseError} for malformed rows and Error{RangeError} for
/// correlators outside [-1, 1]; both messages carry the line number.
std::vector<CorrelatorRow> load_correlator_table(std::istream& in);
std::vector<CorrelatorRow> load_correlator_table(
    const std::filesystem::path& path);

/// Writes rows in the format accepted by load_correlator_table, with 17
/// significant digits. Only parameter columns used by some row are emitted.
void write_correlator_table(std::ostream& out,
                            std::span<const CorrelatorRow> rows);

}  // namespace qcorr
