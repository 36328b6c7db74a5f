#pragma once

#include <stdexcept>
#include <string>

namespace peco {

enum class ErrorCode {
    EmptyData,
    DimensionError,
    SyntaxError,
    UnknownIdentifier,
    IndexOutOfRange,
    DomainError,
    DivideByZero,
    NonDifferentiable,
    NotNormalized,
    DegenerateDensity,
    Infeasible,
    MaxIterations,
    GridOracleDimension,
    SolveFailure,
    FamilyEmpty,
    AssumptionViolated,
    NoFeasibleZ,
    ZTooLarge,
    InsufficientHistory,
    MixedFamilySizes,
    CorruptRecord,
    EmptyProbableSet,
    ExactModeTooLarge,
    ConfigError,
    IoError,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the whole library; code() tells callers (and the
// CLI exit-code mapping) what went wrong without string matching.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace peco
