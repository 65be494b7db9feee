#include "qcorr/error.hpp"

namespace qcorr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
    case ErrorKind::UnsupportedModel: return "unsupported-model";
    case ErrorKind::SizeLimit: return "size-limit";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::RangeError: return "range-error";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::PatternViolation: return "pattern-violation";
    case ErrorKind::UnsupportedChannel: return "unsupported-channel";
    case ErrorKind::NegativeProbability: return "negative-probability";
    case ErrorKind::Unclassifiable: return "unclassifiable";
    case ErrorKind::InsufficientData: return "insufficient-data";
  }
  return "unknown";
}

}  // namespace qcorr
