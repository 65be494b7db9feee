#pragma once

#include <string>
#include <string_view>

namespace qcorr {

/// Shortest-exact text for CSV/JSON output: 17 significant digits, so a
/// parsed value compares equal to the original.
std::string format_number(double value);

/// Strict parse of a whole field (surrounding blanks allowed). Returns false
/// when the text is not a finite number.
bool parse_number(std::string_view text, double& value);

}  // namespace qcorr
