#pragma once

#include <stdexcept>
#include <string>

namespace ymh {

/** Bad argument values (out-of-range sizes, unknown vertices/edges). */
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** API misuse (wrong mode for the given input shape). */
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

/** Inputs that fail an operation's pattern precondition. */
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Text input failed to parse; carries a position. */
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

}  // namespace ymh
