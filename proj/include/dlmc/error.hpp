#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlmc {

/// Base class for every domain failure raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Netlist or manifest text that cannot be read. Carries a 1-based line/column.
class parse_error : public error {
public:
  parse_error(std::size_t line, std::size_t column, const std::string& what)
      : error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// An exact enumeration would exceed its configured budget.
class budget_exceeded : public error {
public:
  using error::error;
};

/// A circuit or DLM violates a precondition of the requested operation.
class invalid_argument : public error {
public:
  using error::error;
};

/// Algorithm-1 execution hit a semantic violation (illegal unmask, surviving mask, bad encoding).
class run_error : public error {
public:
  using error::error;
};

} // namespace dlmc
