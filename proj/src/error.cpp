#include "pwbifurc/error.hpp"

namespace pwbifurc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveMu: return "NonPositiveMu";
    case ErrorCode::IllPosed: return "IllPosed";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::SingularDerivative: return "SingularDerivative";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotMaximal: return "NotMaximal";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NotAFixedPoint: return "NotAFixedPoint";
    case ErrorCode::WrongRegime: return "WrongRegime";
    case ErrorCode::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::OrbitEscaped: return "OrbitEscaped";
    case ErrorCode::AllSamplesIllPosed: return "AllSamplesIllPosed";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace pwbifurc
