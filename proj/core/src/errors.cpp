#include "citestat/errors.hpp"

namespace citestat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "E_ARGUMENT";
    case ErrorCode::InvalidName: return "E_NAME";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::Syntax: return "E_SYNTAX";
    case ErrorCode::Schema: return "E_SCHEMA";
    case ErrorCode::Integrity: return "E_INTEGRITY";
    case ErrorCode::UnknownResearcher: return "E_UNKNOWN_RESEARCHER";
    case ErrorCode::UndefinedCohort: return "E_UNDEFINED_COHORT";
    case ErrorCode::UndefinedProportion: return "E_UNDEFINED_PROPORTION";
    case ErrorCode::UndefinedCovariate: return "E_UNDEFINED_COVARIATE";
    case ErrorCode::RankDeficient: return "E_RANK_DEFICIENT";
    case ErrorCode::Infeasible: return "E_INFEASIBLE";
    case ErrorCode::InsufficientData: return "E_INSUFFICIENT_DATA";
  }
  return "E_UNKNOWN";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
      return 2;
    case ErrorCode::Syntax:
    case ErrorCode::Schema:
    case ErrorCode::Integrity:
    case ErrorCode::InvalidName:
      return 3;
    case ErrorCode::InvalidArgument:
      return 1;
    default:
      return 4;
  }
}

}  // namespace citestat
