#pragma once

#include <stdexcept>
#include <string>

namespace lsflow {

// Error taxonomy shared across the library. The CLI maps these onto exit
// codes: config errors -> 2, everything else caught at top level -> 3.
enum class ErrorCode {
  kDegenerateInput,
  kDimensionMismatch,
  kInfeasible,
  kResourceExhausted,
  kNumeric,
  kContractViolation,
  kConfig,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace lsflow
