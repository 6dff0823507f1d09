#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdv/program.hpp"
#include "sdv/solver.hpp"

namespace sdv {

/// {β}^y_x̄ with β kept as an atom list in insertion order. The empty list
/// is true; the contradiction is exactly {false}.
struct State {
  std::vector<Term> atoms;
  Term output;
  std::vector<Term> inputs;

  bool contradictory() const { return atoms.size() == 1 && atoms[0]->is_false(); }
  Term condition() const { return conj_all(atoms); }
};

VarSet state_vars(const State& s);
std::set<std::string> state_var_names(const State& s);

/// {y = φ(x̄)}^y_x̄ for the main equation. Names default to the parameters and
/// "y" (or a fresh name if a parameter is called y).
State initial_state(const Program& p, const std::string& output = "",
                    const std::vector<std::string>& inputs = {});

/// No functional variables in the condition.
bool is_terminal(const State& s);

class NoSuchOccurrence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotAFormula : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotAString : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Label {
  enum class Kind { Expansion, Guard, StringSplit };
  Kind kind = Kind::Expansion;
  std::string function;  // Expansion
  Term formula;          // Guard: the guard; StringSplit: the split term
  bool positive = true;  // Guard polarity; StringSplit: true for the ε arm
  Term pattern;          // StringSplit cons arm: x·x′

  static Label expansion(std::string f) { return {Kind::Expansion, std::move(f), nullptr, true, nullptr}; }
  static Label guard(Term g, bool pos) { return {Kind::Guard, {}, std::move(g), pos, nullptr}; }
  static Label split(Term e, Term pattern) {
    bool empty = pattern == nullptr;
    return {Kind::StringSplit, {}, std::move(e), empty, std::move(pattern)};
  }
};

std::string to_display(const Label& l);
std::string to_display(const std::vector<Label>& ls);

struct Transition {
  Label label;
  State state;
};

/// Canonical form used everywhere states are compared or displayed: simple
/// bindings inlined (variable-variable bindings keep the variable that occurs
/// first in output, atoms, inputs), nested calls abbreviated by fresh
/// variables, and bindings of otherwise unused variables dropped. Fresh names
/// avoid `avoid` as well as the state's own variables.
State simplify_state(const State& s, const std::set<std::string>& avoid = {});

/// Renames variables by order of first occurrence and sorts atoms; two
/// states are equal iff their canonical forms are identical.
State canonical_form(const State& s);
bool state_equal(const State& a, const State& b);

Transition expand(const State& s, const Term& call_term, const Program& p,
                  const std::set<std::string>& avoid = {});
std::pair<Transition, Transition> split_guard(const State& s, const Term& guard,
                                              const std::set<std::string>& avoid = {});
std::pair<Transition, Transition> split_string(const State& s, const Term& target,
                                               const std::set<std::string>& avoid = {});

/// Fresh name from a preferred pool: splits draw from a, b, c, ...;
/// abbreviations from p, q, r, ...
std::string fresh_from_pool(char first, const std::set<std::string>& avoid);

/// Calls (preorder over atoms) whose value is needed: not inside an
/// if-branch.
std::vector<Term> strict_calls(const State& s);
/// First if-term in a strict position, if any.
std::optional<Term> strict_ite(const State& s);
/// First string variable under head/tail in a strict position.
std::optional<Term> strict_selector_target(const State& s);

std::string to_display(const State& s);

}  // namespace sdv
