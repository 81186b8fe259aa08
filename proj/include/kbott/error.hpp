#pragma once

#include <stdexcept>
#include <string>

namespace kbott {

// Broad failure categories. The CLI maps them onto process exit codes
// (validation -> 1, usage -> 2, budget -> 3), so library code should pick
// the kind that matches how a caller ought to react.
enum class ErrorKind {
  validation,  // input data is structurally or mathematically invalid
  usage,       // the call/invocation itself is malformed (bad paths, bad flags)
  budget,      // a configured work budget was exhausted before an answer
  internal     // a broken invariant inside the library; always a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_validation(const std::string& message) {
  throw Error(ErrorKind::validation, message);
}

[[noreturn]] inline void throw_usage(const std::string& message) {
  throw Error(ErrorKind::usage, message);
}

[[noreturn]] inline void throw_budget(const std::string& message) {
  throw Error(ErrorKind::budget, message);
}

[[noreturn]] inline void throw_internal(const std::string& message) {
  throw Error(ErrorKind::internal, std::string("internal error: ") + message);
}

}  // namespace kbott
