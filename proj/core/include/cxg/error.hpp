#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cxg {

enum class ErrorCode {
  SyntaxError,
  DuplicateVariable,
  UndeclaredReference,
  NoRoot,
  MultipleRoots,
  MalformedPredicate,
  CyclicOrder,
  UnderspecifiedOrder,
  DanglingAdjacency,
  InvalidConstruction,
  SearchExhausted,
  EmptyInput,
  EvaluationFailure,
  NoAlignment,
  TutorFailure,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a stable code so front ends can
/// map it to exit statuses and machine-readable messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cxg
