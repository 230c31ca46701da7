#include "rankfarm/error.hpp"

namespace rankfarm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::WeightError: return "WeightError";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::DuplicateService: return "DuplicateService";
    case ErrorCode::EmptyCatalog: return "EmptyCatalog";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingVReq: return "MissingVReq";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyMatch: return "EmptyMatch";
    case ErrorCode::MissingQoSValue: return "MissingQoSValue";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::NoHierarchy: return "NoHierarchy";
  }
  return "Unknown";
}

}  // namespace rankfarm
