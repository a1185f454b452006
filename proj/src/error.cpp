#include "postaic/error.hpp"

namespace postaic {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::IndexNotInModel: return "IndexNotInModel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NonPositiveRss: return "NonPositiveRSS";
    case ErrorCode::NonPositiveDf: return "NonPositiveDF";
    case ErrorCode::AiccDegenerate: return "AICcDegenerate";
    case ErrorCode::ZeroEta: return "ZeroEta";
    case ErrorCode::EtaNotInSpan: return "EtaNotInSpan";
    case ErrorCode::NotSelectedModel: return "NotSelectedModel";
    case ErrorCode::ObservationOutsideRegion: return "ObservationOutsideRegion";
    case ErrorCode::RegionMassUnderflow: return "RegionMassUnderflow";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::IndexNotInModel:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::AiccDegenerate:
    case ErrorCode::ZeroEta:
    case ErrorCode::EtaNotInSpan:
    case ErrorCode::NotSelectedModel:
      return 2;
    case ErrorCode::RankDeficient:
    case ErrorCode::NonPositiveRss:
    case ErrorCode::NonPositiveDf:
    case ErrorCode::RegionMassUnderflow:
    case ErrorCode::BracketFailure:
      return 3;
    case ErrorCode::ObservationOutsideRegion:
    case ErrorCode::InvariantViolation:
      return 4;
  }
  return 4;
}

}  // namespace postaic
