#pragma once

#include <stdexcept>
#include <string>

namespace postaic {

enum class ErrorCode {
  DimensionMismatch,
  IndexOutOfRange,
  IndexNotInModel,
  InvalidArgument,
  ParseError,
  IoError,
  RankDeficient,
  NonPositiveRss,
  NonPositiveDf,
  AiccDegenerate,
  ZeroEta,
  EtaNotInSpan,
  NotSelectedModel,
  ObservationOutsideRegion,
  RegionMassUnderflow,
  BracketFailure,
  InvariantViolation,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers (and the CLI
// exit status) can tell input problems from numerical breakdowns.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// 2 input error, 3 numerical failure, 4 internal invariant violation.
int exit_code(ErrorCode code);

}  // namespace postaic
