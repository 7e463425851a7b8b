#pragma once

#include <stdexcept>
#include <string>

namespace susyqm {

enum class ErrorKind {
  InvalidArgument,  // precondition violated by the caller
  GridMismatch,
  NonFinite,
  ZeroNorm,
  Singularity,      // superpotential not evaluable on the grid
  NoBoundState,
  NodePresent,      // expected a nodeless function
  Convergence,
  ConstructionFailure,
  UnknownName,
  Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace susyqm
