#pragma once

#include <stdexcept>
#include <string>

namespace stlplan {

// Bad user input: dimension mismatches, unknown names, schema violations.
class input_error : public std::runtime_error {
public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Formula text that does not conform to the grammar. Carries 1-based
// line/column of the offending token.
class syntax_error : public std::runtime_error {
public:
  syntax_error(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

// A construct the pipeline deliberately does not handle (e.g. negated Until).
class unsupported_error : public std::runtime_error {
public:
  explicit unsupported_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace stlplan
