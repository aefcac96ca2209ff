#include "schubart/error.hpp"

namespace schubart {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::ImaginaryGamma: return "ImaginaryGamma";
    case ErrorKind::NoExit: return "NoExit";
    case ErrorKind::NoFaceChange: return "NoFaceChange";
    case ErrorKind::ClosureFailure: return "ClosureFailure";
    case ErrorKind::BranchViolation: return "BranchViolation";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace schubart
