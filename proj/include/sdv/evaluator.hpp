#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sdv/program.hpp"

namespace sdv {

struct Value {
  Sort sort = Sort::Bool;
  char ch = 0;
  std::string str;
  bool truth = false;

  static Value of_char(char c) { return {Sort::Char, c, {}, false}; }
  static Value of_str(std::string s) { return {Sort::Str, 0, std::move(s), false}; }
  static Value of_bool(bool b) { return {Sort::Bool, 0, {}, b}; }

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value&, const Value&) = default;
};

std::string to_string(const Value& v);
/// Constant term denoting the value.
Term to_term(const Value& v);

using Evaluation = std::map<std::string, Value>;

struct EvalOutcome {
  enum class Kind { Defined, Undefined, FuelExhausted };
  Kind kind = Kind::Undefined;
  Value value;

  bool defined() const { return kind == Kind::Defined; }
  static EvalOutcome of(Value v) { return {Kind::Defined, std::move(v)}; }
  static EvalOutcome undefined() { return {Kind::Undefined, {}}; }
  static EvalOutcome exhausted() { return {Kind::FuelExhausted, {}}; }
  friend bool operator==(const EvalOutcome&, const EvalOutcome&) = default;
};

std::string to_string(const EvalOutcome& o);

inline constexpr std::size_t kDefaultFuel = 10000;

class ArityMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates a call-free term. Calls yield Undefined.
EvalOutcome eval_closed(const Term& e, const Evaluation& xi);

/// Evaluates with functional variables unfolded call-by-value. Fuel counts
/// call unfoldings across the whole evaluation.
EvalOutcome eval_in_program(const Term& e, const Evaluation& xi, const Program& program,
                            std::size_t fuel = kDefaultFuel);

EvalOutcome eval_program(const Program& program, const std::vector<Value>& args,
                         std::size_t fuel = kDefaultFuel);

struct TypedVar {
  std::string name;
  Sort sort;
};

/// All strings over the alphabet with length <= max_len, shortest first,
/// then lexicographic in alphabet order.
std::vector<std::string> enumerate_strings(const std::string& alphabet, std::size_t max_len);

/// Calls `visit` for every type-correct evaluation of vars (strings up to
/// max_len). Deterministic order: the last variable varies fastest. Stops
/// early when visit returns false.
void for_each_evaluation(const std::vector<TypedVar>& vars, const std::string& alphabet,
                         std::size_t max_len, const std::function<bool(const Evaluation&)>& visit);

std::vector<Evaluation> enumerate_evaluations(const std::vector<TypedVar>& vars,
                                              const std::string& alphabet, std::size_t max_len);

/// Number of evaluations for_each_evaluation would visit (saturating).
std::size_t count_evaluations(const std::vector<TypedVar>& vars, const std::string& alphabet,
                              std::size_t max_len);

std::vector<TypedVar> typed_vars(const VarSet& vars);

}  // namespace sdv
