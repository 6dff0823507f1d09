#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdv {

enum class Sort : std::uint8_t { Char, Str, Bool };

std::string_view sort_name(Sort s);

enum class Op : std::uint8_t { Head, Tail, Conc, Eq, Leq, Lt, Not, And, Or, Ite };

enum class TermKind : std::uint8_t { Var, CharLit, Eps, BoolLit, Prim, Call };

class TermNode;
using Term = std::shared_ptr<const TermNode>;

/// Immutable typed expression node. Construct through the factory functions
/// below, which check arity and argument sorts.
class TermNode {
 public:
  TermKind kind;
  Sort sort;
  std::string name;  // variable or functional-variable name
  char ch = 0;       // CharLit
  bool truth = false;  // BoolLit
  Op op = Op::Head;    // Prim
  std::vector<Term> args;

  TermNode(TermKind k, Sort s) : kind(k), sort(s) {}

  bool is_var() const { return kind == TermKind::Var; }
  bool is_call() const { return kind == TermKind::Call; }
  bool is_prim(Op o) const { return kind == TermKind::Prim && op == o; }
  bool is_const() const {
    return kind == TermKind::CharLit || kind == TermKind::Eps || kind == TermKind::BoolLit;
  }
  bool is_true() const { return kind == TermKind::BoolLit && truth; }
  bool is_false() const { return kind == TermKind::BoolLit && !truth; }
};

class TermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Factories.
Term var(std::string name, Sort s);
Term chr(char c);
Term eps();
Term boolean(bool b);
Term prim(Op op, std::vector<Term> args);
Term call(std::string name, Sort result, std::vector<Term> args);

inline Term head(Term e) { return prim(Op::Head, {std::move(e)}); }
inline Term tail(Term e) { return prim(Op::Tail, {std::move(e)}); }
inline Term conc(Term a, Term u) { return prim(Op::Conc, {std::move(a), std::move(u)}); }
inline Term eq(Term a, Term b) { return prim(Op::Eq, {std::move(a), std::move(b)}); }
inline Term leq(Term a, Term b) { return prim(Op::Leq, {std::move(a), std::move(b)}); }
inline Term lt(Term a, Term b) { return prim(Op::Lt, {std::move(a), std::move(b)}); }
inline Term neg(Term a) { return prim(Op::Not, {std::move(a)}); }
inline Term conj(Term a, Term b) { return prim(Op::And, {std::move(a), std::move(b)}); }
inline Term disj(Term a, Term b) { return prim(Op::Or, {std::move(a), std::move(b)}); }
inline Term ite(Term g, Term a, Term b) {
  return prim(Op::Ite, {std::move(g), std::move(a), std::move(b)});
}

/// String literal as a cons chain ending in eps.
Term str_lit(std::string_view s);
/// Conjunction of a list; empty list is true.
Term conj_all(const std::vector<Term>& parts);

// Structural comparison.
bool term_equal(const Term& a, const Term& b);
int term_compare(const Term& a, const Term& b);
struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_compare(a, b) < 0; }
};

std::size_t term_size(const Term& t);

/// A simple term is a concatenation of variables and constants.
bool is_simple(const Term& t);
bool is_ground(const Term& t);  // no variables and no calls
bool has_call(const Term& t);
bool contains(const Term& haystack, const Term& needle);

using VarSet = std::map<std::string, Sort>;

void collect_vars(const Term& t, VarSet& out);
VarSet free_data_vars(const Term& t);
std::set<std::string> functional_vars(const Term& t);

/// Variables in order of first occurrence (left-to-right, depth first).
void vars_in_order(const Term& t, std::vector<std::string>& out);

/// Simultaneous replacement of every occurrence of each target. Replacement
/// material is never revisited.
Term substitute(const Term& e, const std::vector<std::pair<Term, Term>>& pairs);

/// Type-preserving map from distinct variables to simple terms.
class Clarification {
 public:
  Clarification() = default;

  /// Throws TermError on duplicate variables, sort mismatch, or non-simple targets.
  void bind(const std::string& name, Sort s, Term target);
  const Term* find(const std::string& name) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  bool is_renaming() const;

  struct Binding {
    std::string name;
    Sort sort;
    Term target;
  };
  const std::vector<Binding>& bindings() const { return bindings_; }

  /// Bindings that are not the identity, in binding order.
  std::vector<Binding> non_identity() const;

 private:
  std::vector<Binding> bindings_;
};

Term apply_clarification(const Term& e, const Clarification& theta);

/// Returns hint if unused, otherwise hint followed by the smallest positive
/// integer suffix not in avoid.
std::string fresh_var(const std::string& hint, const VarSet& avoid);
std::string fresh_var(const std::string& hint, const std::set<std::string>& avoid);

// Printing. Source form re-parses with the program grammar; display form is
// compact (concatenations juxtaposed, eps as "ε").
std::string to_source(const Term& t);
std::string to_display(const Term& t);

/// Elements of a cons chain; the last element is the chain's tail (eps or a
/// non-conc term). For a non-conc term returns {t}.
std::vector<Term> conc_elements(const Term& t);
Term conc_chain(const std::vector<Term>& prefix, Term last);

}  // namespace sdv
