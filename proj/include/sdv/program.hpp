#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sdv/term.hpp"

namespace sdv {

struct Param {
  std::string name;
  Sort sort;
};

struct Equation {
  std::string name;
  std::vector<Param> params;
  Sort result;
  Term body;

  std::vector<Sort> param_sorts() const;
};

/// Ordered equation system; the first equation is the main one.
class Program {
 public:
  Program() = default;
  /// Validates every well-formedness invariant; throws TypeError or
  /// DuplicateFunction on violation.
  explicit Program(std::vector<Equation> equations);

  const std::vector<Equation>& equations() const { return equations_; }
  const Equation& main() const { return equations_.front(); }
  const Equation* find(std::string_view name) const;

 private:
  std::vector<Equation> equations_;
};

// Errors raised by parsing and typechecking.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, std::size_t line, std::size_t column);
  std::size_t line;
  std::size_t column;
};

class TypeError : public std::runtime_error {
 public:
  TypeError(const std::string& equation, const std::string& expected, const std::string& found);
  std::string equation;
  std::string expected;
  std::string found;
};

class DuplicateFunction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundVariable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Program parse_program(std::string_view source);

/// Parses a single term. Variables are typed by `env`; calls are resolved
/// against `program` (may be null when the text has no calls).
Term parse_term(std::string_view text, const VarSet& env, const Program* program);

std::string to_source(const Program& p);

}  // namespace sdv
