#pragma once

#include <stdexcept>
#include <string>

namespace decomp {

enum class ErrorKind {
  InvalidInput,
  NotLaminar,
  NotThin,
  NodeInX,
  Inconsistent,
  NotWeaklyPartitive,
  NotWeaklyBipartitive,
  TooLarge,
  NotCograph,
  NotConnected,
  RequiresUndirected,
  DegreeTooLarge,
  SyntaxError,
  ScopeError,
  UnboundVariable,
  MissingSymbol,
  UniverseTooLarge,
};

const char* error_name(ErrorKind k);

// Every domain failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace decomp
