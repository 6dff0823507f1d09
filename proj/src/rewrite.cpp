#include "sdv/rewrite.hpp"

#include <optional>

namespace sdv {

namespace {

Term rebuild(const Term& t, std::vector<Term> args) {
  if (t->is_call()) return call(t->name, t->sort, std::move(args));
  return prim(t->op, std::move(args));
}

// Defined under every evaluation: no calls, no selector on an unknown shape.
bool total(const Term& t) {
  if (t->is_call()) return false;
  if ((t->is_prim(Op::Head) || t->is_prim(Op::Tail)) && !t->args[0]->is_prim(Op::Conc)) return false;
  for (const auto& a : t->args) {
    if (!total(a)) return false;
  }
  return true;
}

// In strict mode a rule may not drop a subterm that could be undefined, so
// that the result stays ground-equivalent under strict evaluation. Atom sets
// do not need this: there an undefined atom and a false one both exclude the
// evaluation.
std::optional<Term> step(const Term& t, bool strict) {
  if (t->kind != TermKind::Prim) return std::nullopt;
  const auto& a = t->args;
  switch (t->op) {
    case Op::Head:
      if (a[0]->is_prim(Op::Conc) && (!strict || total(a[0]->args[1]))) return a[0]->args[0];
      break;
    case Op::Tail:
      if (a[0]->is_prim(Op::Conc) && (!strict || total(a[0]->args[0]))) return a[0]->args[1];
      break;
    case Op::Conc: break;
    case Op::Eq: {
      const Term& l = a[0];
      const Term& r = a[1];
      if (l->sort == Sort::Bool) {
        if (r->is_true()) return l;
        if (l->is_true()) return r;
        if (r->is_false() && !l->is_const()) return neg(l);
        if (l->is_false() && !r->is_const()) return neg(r);
      }
      if (term_equal(l, r) && is_simple(l)) return boolean(true);
      if (l->is_prim(Op::Conc) && r->is_prim(Op::Conc)) {
        return conj(eq(l->args[0], r->args[0]), eq(l->args[1], r->args[1]));
      }
      if (((l->kind == TermKind::Eps && r->is_prim(Op::Conc)) || (r->kind == TermKind::Eps && l->is_prim(Op::Conc))) &&
          (!strict || (total(l) && total(r)))) {
        return boolean(false);
      }
      // Orientation: calls go right; a lone variable goes left.
      if (l->is_call() && !r->is_call()) return eq(r, l);
      if (!l->is_var() && r->is_var() && !l->is_call()) return eq(r, l);
      break;
    }
    case Op::Leq:
      if (term_equal(a[0], a[1]) && is_simple(a[0])) return boolean(true);
      break;
    case Op::Lt:
      if (term_equal(a[0], a[1]) && is_simple(a[0])) return boolean(false);
      break;
    case Op::Not: {
      const Term& e = a[0];
      if (e->kind == TermKind::BoolLit) return boolean(!e->truth);
      if (e->is_prim(Op::Not)) return e->args[0];
      if (e->is_prim(Op::Leq)) return lt(e->args[1], e->args[0]);
      if (e->is_prim(Op::Lt)) return leq(e->args[1], e->args[0]);
      break;
    }
    case Op::And:
      if ((a[0]->is_false() && (!strict || total(a[1]))) || (a[1]->is_false() && (!strict || total(a[0])))) {
        return boolean(false);
      }
      if (a[0]->is_true()) return a[1];
      if (a[1]->is_true()) return a[0];
      break;
    case Op::Or:
      if ((a[0]->is_true() && (!strict || total(a[1]))) || (a[1]->is_true() && (!strict || total(a[0])))) {
        return boolean(true);
      }
      if (a[0]->is_false()) return a[1];
      if (a[1]->is_false()) return a[0];
      break;
    case Op::Ite:
      if (a[0]->is_true()) return a[1];
      if (a[0]->is_false()) return a[2];
      if (a[0]->is_prim(Op::Not)) return ite(a[0]->args[0], a[2], a[1]);
      break;
  }
  if (is_ground(t)) {
    auto v = eval_closed(t, {});
    if (v.defined()) {
      Term c = to_term(v.value);
      if (!term_equal(c, t)) return c;
    }
  }
  return std::nullopt;
}

Term canon(const Term& t, bool strict = false) {
  if (t->kind != TermKind::Prim && t->kind != TermKind::Call) return t;
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& x : t->args) {
    args.push_back(canon(x, strict));
    changed = changed || args.back() != x;
  }
  Term cur = changed ? rebuild(t, std::move(args)) : t;
  if (auto r = step(cur, strict)) return canon(*r, strict);
  return cur;
}

void flatten(const Term& t, std::vector<Term>& out) {
  if (t->is_prim(Op::And)) {
    flatten(t->args[0], out);
    flatten(t->args[1], out);
  } else {
    out.push_back(t);
  }
}

// Replacement pairs implied by an atom being true.
std::vector<std::pair<Term, Term>> implied(const Term& g, bool inline_bindings) {
  std::vector<std::pair<Term, Term>> pairs;
  pairs.emplace_back(g, boolean(true));
  if (g->is_prim(Op::Not)) pairs.emplace_back(g->args[0], boolean(false));
  if (g->is_prim(Op::Leq)) pairs.emplace_back(lt(g->args[1], g->args[0]), boolean(false));
  if (g->is_prim(Op::Lt)) {
    pairs.emplace_back(leq(g->args[1], g->args[0]), boolean(false));
    pairs.emplace_back(leq(g->args[0], g->args[1]), boolean(true));
    pairs.emplace_back(lt(g->args[1], g->args[0]), boolean(false));
  }
  if (g->is_prim(Op::Eq)) {
    pairs.emplace_back(eq(g->args[1], g->args[0]), boolean(true));
    const Term& l = g->args[0];
    const Term& r = g->args[1];
    if (inline_bindings && l->is_var() && is_simple(r) && !contains(r, l)) {
      pairs.emplace_back(l, r);
    }
  }
  return pairs;
}

}  // namespace

Term canonicalize_local(const Term& t) { return canon(t); }

bool is_contradiction(const std::vector<Term>& atoms) {
  return atoms.size() == 1 && atoms[0]->is_false();
}

namespace {

std::vector<Term> normalize_atoms(const std::vector<Term>& input, bool inline_bindings, bool strict) {
  std::vector<Term> atoms;
  auto normalize = [&](const std::vector<Term>& in) -> bool {
    std::vector<Term> out;
    std::vector<Term> all;
    for (const auto& a : in) flatten(canon(a, strict), all);
    bool all_total = true;
    for (const auto& p : all) all_total = all_total && total(p);
    for (const auto& a : in) {
      std::vector<Term> parts;
      flatten(canon(a, strict), parts);
      for (auto& p : parts) {
        if (p->is_true()) continue;
        if (p->is_false() && (!strict || all_total)) {
          atoms = {boolean(false)};
          return false;
        }
        bool dup = false;
        for (const auto& o : out) dup = dup || term_equal(o, p);
        if (!dup) out.push_back(p);
      }
    }
    atoms = std::move(out);
    return true;
  };
  if (!normalize(input)) return atoms;
  for (int round = 0; round < 64; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      auto pairs = implied(atoms[i], inline_bindings);
      if (strict && !total(atoms[i])) continue;
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (j == i) continue;
        Term r = substitute(atoms[j], pairs);
        if (strict && (!total(atoms[j]) || !total(r))) continue;
        if (r != atoms[j] && !term_equal(r, atoms[j])) {
          atoms[j] = canon(r, strict);
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (!normalize(atoms)) return atoms;
  }
  return atoms;
}

}  // namespace

std::vector<Term> canonicalize_atoms(const std::vector<Term>& input, bool inline_bindings) {
  return normalize_atoms(input, inline_bindings, false);
}

std::vector<Term> conjuncts(const Term& f) {
  std::vector<Term> parts;
  flatten(canon(f), parts);
  std::vector<Term> out;
  for (auto& p : parts) {
    if (p->is_true()) continue;
    if (p->is_false()) return {boolean(false)};
    out.push_back(p);
  }
  return out;
}

Term canonicalize(const Term& f) {
  if (f->sort != Sort::Bool) return canon(f);
  return conj_all(normalize_atoms({f}, true, true));
}

bool ground_equiv(const Term& e1, const Term& e2, const Program* program, const Bound& bound) {
  if (e1->sort != e2->sort) return false;
  VarSet vs;
  collect_vars(e1, vs);
  collect_vars(e2, vs);
  bool ok = true;
  auto run = [&](const Term& e, const Evaluation& xi) {
    return program ? eval_in_program(e, xi, *program, bound.fuel) : eval_closed(e, xi);
  };
  for_each_evaluation(typed_vars(vs), bound.alphabet, bound.max_len, [&](const Evaluation& xi) {
    auto a = run(e1, xi);
    auto b = run(e2, xi);
    if (a.defined() != b.defined() || (a.defined() && !(a.value == b.value))) ok = false;
    return ok;
  });
  return ok;
}

}  // namespace sdv
