#pragma once

#include <stdexcept>
#include <string>

namespace thermalcat {

// Numeric values are shared with the C API status codes in thermalcat.h.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Parse = 2,
  Domain = 3,
  DegenerateSuperposition = 4,
  UndefinedVisibility = 5,
  GridTooSmall = 6,
  Numerical = 7,
  Units = 8,
  ContractViolation = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace thermalcat
