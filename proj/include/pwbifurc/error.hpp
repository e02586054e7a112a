#pragma once

#include <stdexcept>
#include <string>

namespace pwbifurc {

enum class ErrorCode {
  InvalidParams,
  InvalidArgument,
  NonPositiveMu,
  IllPosed,
  OutOfDomain,
  SingularDerivative,
  SingularPoint,
  BudgetExceeded,
  NotMaximal,
  OutOfRange,
  NoRoot,
  NotAFixedPoint,
  WrongRegime,
  DegenerateBoundary,
  InsufficientData,
  OrbitEscaped,
  AllSamplesIllPosed,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pwbifurc
