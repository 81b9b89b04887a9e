#ifndef QWP_ERROR_HPP
#define QWP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qwp {

// Every failure the library reports, in one flat enumeration. The CLI maps
// these onto its documented exit codes; tests match on them directly.
enum class ErrorCode {
  DimensionMismatch,
  NotSquare,
  NotHermitian,
  NonFinite,
  SignatureMismatch,
  InvalidPredicate,
  InvalidThreshold,
  NonConvergent,
  NonMonotone,
  NotUnitary,
  NotNormalized,
  SyntaxError,
  ScopeError,
  TypeError,
  ElaborationError,
  OutOfRange,
  IoError,
  FormatError,
  Internal,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace qwp

#endif
