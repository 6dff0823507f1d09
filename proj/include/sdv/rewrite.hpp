#pragma once

#include <string>
#include <vector>

#include "sdv/evaluator.hpp"
#include "sdv/program.hpp"

namespace sdv {

/// Applies the oriented equal-term rules bottom-up to a fixpoint. Top-level
/// conjunctions are flattened, deduplicated and contextually simplified: a
/// conjunct x = e (x a variable not in e, e simple) is inlined into the other
/// conjuncts, and a conjunct g rewrites other occurrences of g to true.
Term canonicalize(const Term& f);

/// Same rules on a single term, without conjunction-level context.
Term canonicalize_local(const Term& t);

/// Atom list of a formula; true gives {}, any false collapses to {false}.
std::vector<Term> conjuncts(const Term& f);

/// Canonicalizes each atom, flattens, deduplicates, and applies contextual
/// rewriting. If `inline_bindings` is set, simple variable bindings are also
/// substituted into the other atoms (the binding atom is kept).
std::vector<Term> canonicalize_atoms(const std::vector<Term>& atoms, bool inline_bindings);

bool is_contradiction(const std::vector<Term>& atoms);

struct Bound {
  std::string alphabet = "abc";
  std::size_t max_len = 3;
  std::size_t fuel = 200;
};

/// Bounded check that two terms agree (both non-Defined, or Defined-equal) on
/// every evaluation of their joint free variables.
bool ground_equiv(const Term& e1, const Term& e2, const Program* program, const Bound& bound = {});

}  // namespace sdv
