#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcorr {

enum class ErrorKind {
  Validation,
  QuadratureFailure,
  UnsupportedModel,
  SizeLimit,
  ParseError,
  RangeError,
  InvalidState,
  PatternViolation,
  UnsupportedChannel,
  NegativeProbability,
  Unclassifiable,
  InsufficientData,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so
/// front ends can map it to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qcorr
