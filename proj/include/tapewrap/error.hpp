#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tapewrap {

enum class ErrorCode {
  kInvalidAxis,
  kInvalidVector,
  kDegenerateTriangle,
  kEmptyMesh,
  kDegenerateHull,
  kInvalidSpec,
  kFormatError,
  kInvalidMesh,
  kFileNotFound,
  kIoError,
  kIndexError,
  kNoFreeSegment,
  kInvalidDirection,
  kTapeTooShort,
  kInvalidConfig,
  kInconsistentPlan,
  kOracleFailed,
};

std::string_view error_name(ErrorCode code);

// All library failures are reported through this type; `code()` is what the
// CLI maps onto exit statuses and error names.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace tapewrap
