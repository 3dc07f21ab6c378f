#include "corec/error.hpp"

namespace corec {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ForeignSymbol: return "ForeignSymbol";
    case ErrorCode::NotASummand: return "NotASummand";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::MissingRule: return "MissingRule";
    case ErrorCode::DuplicateRule: return "DuplicateRule";
    case ErrorCode::UnguardedPath: return "UnguardedPath";
    case ErrorCode::InvalidHandle: return "InvalidHandle";
    case ErrorCode::RuleDiverged: return "RuleDiverged";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::VariableClash: return "VariableClash";
    case ErrorCode::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorCode::BadActionStructure: return "BadActionStructure";
    case ErrorCode::UnknownOracle: return "UnknownOracle";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::InvalidCircuit: return "InvalidCircuit";
    case ErrorCode::DanglingPort: return "DanglingPort";
    case ErrorCode::NotGnf: return "NotGnf";
    case ErrorCode::Unguarded: return "Unguarded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCode::SyntaxError,
            std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

}  // namespace corec
