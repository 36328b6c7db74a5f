#include "peco/errors.hpp"

namespace peco {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyData: return "EmptyData";
        case ErrorCode::DimensionError: return "DimensionError";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::DivideByZero: return "DivideByZero";
        case ErrorCode::NonDifferentiable: return "NonDifferentiable";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::DegenerateDensity: return "DegenerateDensity";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::MaxIterations: return "MaxIterations";
        case ErrorCode::GridOracleDimension: return "GridOracleDimension";
        case ErrorCode::SolveFailure: return "SolveFailure";
        case ErrorCode::FamilyEmpty: return "FamilyEmpty";
        case ErrorCode::AssumptionViolated: return "AssumptionViolated";
        case ErrorCode::NoFeasibleZ: return "NoFeasibleZ";
        case ErrorCode::ZTooLarge: return "ZTooLarge";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::MixedFamilySizes: return "MixedFamilySizes";
        case ErrorCode::CorruptRecord: return "CorruptRecord";
        case ErrorCode::EmptyProbableSet: return "EmptyProbableSet";
        case ErrorCode::ExactModeTooLarge: return "ExactModeTooLarge";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace peco
