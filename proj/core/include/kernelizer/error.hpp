#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kernelizer {

enum class ErrorCode {
  kInvalidShape,
  kInvalidPrecision,
  kShapeMismatch,
  kCorruptFactorization,
  kNotApplicable,
  kUnsupportedAxis,
  kInvalidArgument,
  kMalformedScheme,
  kZeroPivot,
  kParse,
  kInternal,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// front ends can map them onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace kernelizer
