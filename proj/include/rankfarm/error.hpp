#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rankfarm {

enum class ErrorCode {
  ParseError,
  SchemaError,
  WeightError,
  UnknownAttribute,
  NonPositiveValue,
  DuplicateService,
  EmptyCatalog,
  IoError,
  MissingVReq,
  NoConvergence,
  DimensionMismatch,
  EmptyMatch,
  MissingQoSValue,
  UnsupportedFormat,
  NoHierarchy,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library carries one of the codes above; the
/// CLI and the HTTP facade map codes to exit statuses and response codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace rankfarm
