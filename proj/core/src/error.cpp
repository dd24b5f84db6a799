#include "smlab/error.hpp"

namespace smlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::QuotaViolation: return "QuotaViolation";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::InvalidPreferences: return "InvalidPreferences";
    case ErrorCode::NotPerfect: return "NotPerfect";
    case ErrorCode::PhantomBlock: return "PhantomBlock";
    case ErrorCode::NotFull: return "NotFull";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::AlphaTooSmall: return "AlphaTooSmall";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::NoConsistentOrder: return "NoConsistentOrder";
    case ErrorCode::MalformedClause: return "MalformedClause";
    case ErrorCode::InvalidConstraint: return "InvalidConstraint";
    case ErrorCode::RestartLimit: return "RestartLimit";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::DuplicateConstraint: return "DuplicateConstraint";
    case ErrorCode::SamplerStarvation: return "SamplerStarvation";
    case ErrorCode::NotTerminated: return "NotTerminated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::QuotaOutOfRange: return "QuotaOutOfRange";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace smlab
