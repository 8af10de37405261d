// errors.hpp -- exception types shared across the library
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hlv {

// Base class so callers can catch everything coming out of this library
// with one handler when they do not care about the distinctions.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text. `position` is a byte offset into the input.
struct SyntaxError : Error {
  std::size_t position;
  SyntaxError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// A body atom uses a trace variable the quantifier prefix does not bind.
struct UnboundVariableError : Error {
  std::string variable;
  explicit UnboundVariableError(const std::string& var)
      : Error("unbound trace variable '" + var + "'"), variable(var) {}
};

// The same trace variable is quantified twice in one prefix.
struct DuplicateQuantifierError : Error {
  std::string variable;
  explicit DuplicateQuantifierError(const std::string& var)
      : Error("trace variable '" + var + "' quantified twice"), variable(var) {}
};

// A transition names a state that was never declared.
struct DanglingStateError : Error {
  std::string state;
  explicit DanglingStateError(const std::string& s)
      : Error("undeclared state '" + s + "'"), state(s) {}
};

// A state has no outgoing transition; the transition relation must be total.
struct DeadEndError : Error {
  std::string state;
  explicit DeadEndError(const std::string& s)
      : Error("state '" + s + "' has no successor"), state(s) {}
};

// A label uses an atomic proposition outside the declared set.
struct UnknownApError : Error {
  std::string ap;
  explicit UnknownApError(const std::string& name)
      : Error("unknown atomic proposition '" + name + "'"), ap(name) {}
};

// A construction exceeded one of the configured size caps.
struct ResourceLimitError : Error {
  explicit ResourceLimitError(const std::string& msg) : Error(msg) {}
};

// The input is outside the syntactic fragment the procedure handles.
struct FragmentError : Error {
  explicit FragmentError(const std::string& msg) : Error(msg) {}
};

// An architecture violates a structural requirement.
struct InvalidArchitectureError : Error {
  explicit InvalidArchitectureError(const std::string& msg) : Error(msg) {}
};

// Monitor session errors.
struct DuplicateSessionError : Error {
  explicit DuplicateSessionError(const std::string& id)
      : Error("trace id '" + id + "' already in use"), id(id) {}
  std::string id;
};

struct NoOpenTraceError : Error {
  NoOpenTraceError() : Error("no trace is currently open") {}
};

struct EmptyTraceError : Error {
  EmptyTraceError() : Error("trace ended without any event") {}
};

}  // namespace hlv
