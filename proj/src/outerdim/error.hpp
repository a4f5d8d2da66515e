#pragma once

#include <stdexcept>
#include <string>

namespace outerdim {

// Failure classes shared by every module. The C API maps these one-to-one
// onto od_status values, and the CLI maps them onto process exit codes.
enum class ErrorCode {
  InvalidArgument,
  Parse,
  EmptyDomain,
  NonFinite,
  RangeEscape,
  DegenerateInterval,
  NonDyadicScale,
  InvalidK,
  NotInCarrier,
  UnboundedPiece,
  ConstantNotOne,
  InvalidRatio,
  DegenerateLadder,
  WindowMissing,
  ExponentOrder,
  Infeasible,
  UncoveredPoint,
  Internal,
};

const char* error_code_name(ErrorCode code) noexcept;

// True for codes that mean "the requested construction cannot be built".
bool is_infeasible_construction(ErrorCode code) noexcept;

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

}  // namespace outerdim
