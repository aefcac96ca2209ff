#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schubart {

enum class ErrorKind {
  InvalidArgument,
  Singular,
  OutOfDomain,
  StepFailure,
  ImaginaryGamma,
  NoExit,
  NoFaceChange,
  ClosureFailure,
  BranchViolation,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can report it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace schubart
