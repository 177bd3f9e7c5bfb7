#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cfmm {

/// Failure categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorCode {
  DimensionMismatch,
  InvalidParameter,
  InvalidSet,
  NonBracketing,
  NoBracketFound,
  MaxIterExceeded,
  ZeroLiquidity,
  NonSmoothPoint,
  Unsupported,
  InvalidScale,
  IndexOutOfRange,
  NotInSet,
  InfeasibleFirstTrade,
  RemoveExceedsShare,
  NonPositiveFraction,
  NotConverged,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

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

inline void require_dim(std::size_t expected, std::size_t got, std::string_view where) {
  if (expected != got) {
    fail(ErrorCode::DimensionMismatch,
         std::string(where) + ": expected dimension " + std::to_string(expected) +
             ", got " + std::to_string(got));
  }
}

}  // namespace cfmm
