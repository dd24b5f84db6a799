#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smlab {

enum class ErrorCode {
  // market_core
  QuotaViolation,
  UnknownAgent,
  InvalidPreferences,
  NotPerfect,
  PhantomBlock,
  // deferred_acceptance
  NotFull,
  // order_constraints
  Infeasible,
  TooLarge,
  AlphaTooSmall,
  CycleDetected,
  NoConsistentOrder,
  MalformedClause,
  InvalidConstraint,
  // linext_sampler
  RestartLimit,
  // learners / environments
  ProtocolViolation,
  DuplicateConstraint,
  SamplerStarvation,
  NotTerminated,
  // harness
  ParseError,
  DuplicateEntry,
  IndexOutOfRange,
  QuotaOutOfRange,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace smlab
