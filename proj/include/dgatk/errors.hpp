#pragma once

#include <stdexcept>
#include <string>

namespace dgatk {

/// Malformed presentation text; carries the 1-based source position.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// A mathematical precondition failed (inconsistent presentation, map that
/// is not a chain map, infinite enumeration, ...).
class HypothesisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configured cap (monomials per degree, enumeration size) was exceeded.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace dgatk
