#include "sdv/state.hpp"

#include <algorithm>
#include <functional>

#include "sdv/rewrite.hpp"

namespace sdv {

VarSet state_vars(const State& s) {
  VarSet vs;
  for (const auto& a : s.atoms) collect_vars(a, vs);
  if (s.output) collect_vars(s.output, vs);
  for (const auto& i : s.inputs) collect_vars(i, vs);
  return vs;
}

std::set<std::string> state_var_names(const State& s) {
  std::set<std::string> out;
  for (const auto& [n, _] : state_vars(s)) out.insert(n);
  return out;
}

State initial_state(const Program& p, const std::string& output,
                    const std::vector<std::string>& inputs) {
  const auto& m = p.main();
  std::set<std::string> used;
  State s;
  std::vector<Term> args;
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    std::string n = i < inputs.size() ? inputs[i] : m.params[i].name;
    used.insert(n);
    args.push_back(var(n, m.params[i].sort));
  }
  std::string y = output.empty() ? fresh_var("y", used) : output;
  s.output = var(y, m.result);
  s.atoms = {eq(s.output, call(m.name, m.result, args))};
  s.inputs = args;
  return s;
}

bool is_terminal(const State& s) {
  return std::none_of(s.atoms.begin(), s.atoms.end(), [](const Term& a) { return has_call(a); });
}

std::string fresh_from_pool(char first, const std::set<std::string>& avoid) {
  for (char c = first; c <= 'z'; ++c) {
    std::string n(1, c);
    if (!avoid.contains(n)) return n;
  }
  for (char c = 'a'; c < first; ++c) {
    std::string n(1, c);
    if (!avoid.contains(n)) return n;
  }
  return fresh_var(std::string(1, first), avoid);
}

namespace {

// Preorder walk over positions whose value is needed (if-branches skipped).
void walk_strict(const Term& t, const std::function<bool(const Term&)>& visit) {
  if (!visit(t)) return;
  if (t->is_prim(Op::Ite)) {
    walk_strict(t->args[0], visit);
    return;
  }
  for (const auto& a : t->args) walk_strict(a, visit);
}

std::vector<std::string> occurrence_order(const State& s) {
  std::vector<std::string> order;
  if (s.output) vars_in_order(s.output, order);
  for (const auto& a : s.atoms) vars_in_order(a, order);
  for (const auto& i : s.inputs) vars_in_order(i, order);
  std::vector<std::string> uniq;
  for (const auto& n : order) {
    if (std::find(uniq.begin(), uniq.end(), n) == uniq.end()) uniq.push_back(n);
  }
  return uniq;
}

bool occurs_in(const std::string& name, const Term& t) {
  if (t->is_var()) return t->name == name;
  return std::any_of(t->args.begin(), t->args.end(), [&](const Term& a) { return occurs_in(name, a); });
}

State replace_everywhere(const State& s, const std::vector<std::pair<Term, Term>>& pairs,
                         std::size_t skip) {
  State r = s;
  for (std::size_t i = 0; i < r.atoms.size(); ++i) {
    if (i != skip) r.atoms[i] = substitute(r.atoms[i], pairs);
  }
  r.output = substitute(r.output, pairs);
  for (auto& in : r.inputs) in = substitute(in, pairs);
  return r;
}

bool selects_empty(const Term& a) {
  bool bad = false;
  walk_strict(a, [&](const Term& t) {
    if ((t->is_prim(Op::Head) || t->is_prim(Op::Tail)) && t->args[0]->kind == TermKind::Eps) bad = true;
    return !bad;
  });
  return bad;
}

// One normalization step; returns false when nothing applies.
bool simplify_step(State& s, const std::set<std::string>& avoid) {
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    const Term& a = s.atoms[i];
    Term v;
    bool value = true;
    if (a->is_var()) v = a;
    if (a->is_prim(Op::Not) && a->args[0]->is_var()) {
      v = a->args[0];
      value = false;
    }
    if (!v) continue;
    State r = replace_everywhere(s, {{v, boolean(value)}}, i);
    r.atoms.erase(r.atoms.begin() + static_cast<long>(i));
    s = std::move(r);
    return true;
  }
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    const Term& a = s.atoms[i];
    if (!a->is_prim(Op::Eq)) continue;
    Term l = a->args[0], r = a->args[1];
    bool lv = l->is_var() && is_simple(r) && !contains(r, l);
    bool rv = r->is_var() && is_simple(l) && !contains(l, r);
    if (!lv && !rv) continue;
    if (lv && rv) {
      auto order = occurrence_order(s);
      auto pos = [&](const std::string& n) { return std::find(order.begin(), order.end(), n) - order.begin(); };
      if (pos(l->name) < pos(r->name)) std::swap(l, r);  // keep the earlier one
    } else if (!lv) {
      std::swap(l, r);
    }
    State nx = replace_everywhere(s, {{l, r}}, i);
    nx.atoms.erase(nx.atoms.begin() + static_cast<long>(i));
    s = std::move(nx);
    return true;
  }
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    const Term& a = s.atoms[i];
    Term nested;
    walk_strict(a, [&](const Term& t) {
      if (nested) return false;
      if (t->is_call() && t != a &&
          !(a->is_prim(Op::Eq) && (t == a->args[0] || t == a->args[1]))) {
        // Innermost first: abbreviate nested calls inside this one before it.
        Term inner;
        walk_strict(t, [&](const Term& u) {
          if (u != t && u->is_call() && !inner) inner = u;
          return !inner;
        });
        nested = inner ? inner : t;
        return false;
      }
      return true;
    });
    if (!nested) continue;
    std::set<std::string> used = avoid;
    for (const auto& n : state_var_names(s)) used.insert(n);
    Term p = var(fresh_from_pool('p', used), nested->sort);
    State r = replace_everywhere(s, {{nested, p}}, static_cast<std::size_t>(-1));
    r.atoms.insert(r.atoms.begin() + static_cast<long>(i) + 1, eq(p, nested));
    s = std::move(r);
    return true;
  }
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    const Term& a = s.atoms[i];
    if (!a->is_prim(Op::Eq) || !a->args[0]->is_var() || !a->args[1]->is_call()) continue;
    const std::string& x = a->args[0]->name;
    if (occurs_in(x, a->args[1])) continue;
    bool used = occurs_in(x, s.output);
    for (const auto& in : s.inputs) used = used || occurs_in(x, in);
    for (std::size_t j = 0; j < s.atoms.size() && !used; ++j) {
      if (j != i) used = occurs_in(x, s.atoms[j]);
    }
    if (used) continue;
    s.atoms.erase(s.atoms.begin() + static_cast<long>(i));
    return true;
  }
  return false;
}

}  // namespace

State simplify_state(const State& in, const std::set<std::string>& avoid) {
  State s = in;
  for (int round = 0; round < 256; ++round) {
    s.atoms = canonicalize_atoms(s.atoms, false);
    if (!s.contradictory() && std::any_of(s.atoms.begin(), s.atoms.end(), selects_empty)) {
      s.atoms = {boolean(false)};
    }
    if (s.contradictory()) break;
    if (!simplify_step(s, avoid)) break;
  }
  s.output = canonicalize_local(s.output);
  for (auto& i : s.inputs) i = canonicalize_local(i);
  return s;
}

namespace {

// Name-independent key used to order atoms before renaming.
std::string shape_key(const Term& t) {
  if (t->is_var()) return std::string("_") + std::string(sort_name(t->sort));
  if (t->kind != TermKind::Prim && t->kind != TermKind::Call) return to_source(t);
  std::string k = t->is_call() ? t->name : std::to_string(static_cast<int>(t->op));
  k += "(";
  for (const auto& a : t->args) k += shape_key(a) + ",";
  return k + ")";
}

State rename_by_occurrence(const State& s) {
  std::vector<std::string> order;
  if (s.output) vars_in_order(s.output, order);
  for (const auto& i : s.inputs) vars_in_order(i, order);
  for (const auto& a : s.atoms) vars_in_order(a, order);
  VarSet sorts = state_vars(s);
  std::vector<std::pair<Term, Term>> pairs;
  std::set<std::string> seen;
  for (const auto& n : order) {
    if (!seen.insert(n).second) continue;
    pairs.emplace_back(var(n, sorts.at(n)), var("v" + std::to_string(pairs.size()), sorts.at(n)));
  }
  State r = s;
  for (auto& a : r.atoms) a = substitute(a, pairs);
  r.output = substitute(r.output, pairs);
  for (auto& i : r.inputs) i = substitute(i, pairs);
  return r;
}

}  // namespace

State canonical_form(const State& s) {
  State r = s;
  std::stable_sort(r.atoms.begin(), r.atoms.end(),
                   [](const Term& a, const Term& b) { return shape_key(a) < shape_key(b); });
  r = rename_by_occurrence(r);
  std::stable_sort(r.atoms.begin(), r.atoms.end(), TermLess{});
  return r;
}

bool state_equal(const State& a, const State& b) {
  State x = canonical_form(simplify_state(a));
  State y = canonical_form(simplify_state(b));
  if (x.atoms.size() != y.atoms.size() || x.inputs.size() != y.inputs.size()) return false;
  if (!term_equal(x.output, y.output)) return false;
  for (std::size_t i = 0; i < x.inputs.size(); ++i) {
    if (!term_equal(x.inputs[i], y.inputs[i])) return false;
  }
  for (std::size_t i = 0; i < x.atoms.size(); ++i) {
    if (!term_equal(x.atoms[i], y.atoms[i])) return false;
  }
  return true;
}

std::vector<Term> strict_calls(const State& s) {
  std::vector<Term> out;
  for (const auto& a : s.atoms) {
    walk_strict(a, [&](const Term& t) {
      if (t->is_call()) out.push_back(t);
      return true;
    });
  }
  return out;
}

std::optional<Term> strict_ite(const State& s) {
  for (const auto& a : s.atoms) {
    Term found;
    walk_strict(a, [&](const Term& t) {
      if (!found && t->is_prim(Op::Ite)) found = t;
      return !found;
    });
    if (found) return found;
  }
  return std::nullopt;
}

std::optional<Term> strict_selector_target(const State& s) {
  for (const auto& a : s.atoms) {
    Term found;
    walk_strict(a, [&](const Term& t) {
      if (!found && (t->is_prim(Op::Head) || t->is_prim(Op::Tail)) && t->args[0]->is_var()) {
        found = t->args[0];
      }
      return !found;
    });
    if (found) return found;
  }
  return std::nullopt;
}

namespace {

std::set<std::string> with_state(std::set<std::string> avoid, const State& s) {
  for (const auto& n : state_var_names(s)) avoid.insert(n);
  return avoid;
}

bool occurs_term(const State& s, const Term& t) {
  return std::any_of(s.atoms.begin(), s.atoms.end(), [&](const Term& a) { return contains(a, t); });
}

}  // namespace

Transition expand(const State& s, const Term& c, const Program& p, const std::set<std::string>& avoid) {
  if (!c->is_call() || !occurs_term(s, c)) throw NoSuchOccurrence("no occurrence of " + to_source(c));
  const Equation* eqn = p.find(c->name);
  if (eqn == nullptr) throw NoSuchOccurrence("no equation for " + c->name);
  std::vector<std::pair<Term, Term>> params;
  for (std::size_t i = 0; i < eqn->params.size(); ++i) {
    params.emplace_back(var(eqn->params[i].name, eqn->params[i].sort), c->args[i]);
  }
  Term body = substitute(eqn->body, params);
  State r = s;
  for (auto& a : r.atoms) a = substitute(a, {{c, body}});
  return {Label::expansion(c->name), simplify_state(r, with_state(avoid, s))};
}

std::pair<Transition, Transition> split_guard(const State& s, const Term& g,
                                              const std::set<std::string>& avoid) {
  if (g->sort != Sort::Bool) throw NotAFormula(to_source(g) + " is not a formula");
  auto av = with_state(avoid, s);
  State pos = s, negs = s;
  pos.atoms.insert(pos.atoms.begin(), g);
  negs.atoms.insert(negs.atoms.begin(), neg(g));
  return {Transition{Label::guard(g, true), simplify_state(pos, av)},
          Transition{Label::guard(g, false), simplify_state(negs, av)}};
}

std::pair<Transition, Transition> split_string(const State& s, const Term& e,
                                               const std::set<std::string>& avoid) {
  if (e->sort != Sort::Str) throw NotAString(to_source(e) + " is not a string term");
  auto av = with_state(avoid, s);
  Term h = var(fresh_from_pool('a', av), Sort::Char);
  av.insert(h->name);
  Term t = var(fresh_from_pool('a', av), Sort::Str);
  av.insert(t->name);
  State empty = s, cons = s;
  empty.atoms.insert(empty.atoms.begin(), eq(e, sdv::eps()));
  cons.atoms.insert(cons.atoms.begin(), eq(e, conc(h, t)));
  return {Transition{Label::split(e, nullptr), simplify_state(empty, av)},
          Transition{Label::split(e, conc(h, t)), simplify_state(cons, av)}};
}

std::string to_display(const Label& l) {
  switch (l.kind) {
    case Label::Kind::Expansion: return l.function;
    case Label::Kind::Guard: return l.positive ? to_display(l.formula) : "!(" + to_display(l.formula) + ")";
    case Label::Kind::StringSplit:
      return to_display(l.formula) + "=" + (l.pattern ? to_display(l.pattern) : std::string("ε"));
  }
  return "?";
}

std::string to_display(const std::vector<Label>& ls) {
  std::string out;
  for (const auto& l : ls) {
    if (!out.empty()) out += "; ";
    out += to_display(l);
  }
  return out;
}

std::string to_display(const State& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    if (i) out += ", ";
    out += to_display(s.atoms[i]);
  }
  out += "}^" + to_display(s.output) + "_";
  for (std::size_t i = 0; i < s.inputs.size(); ++i) {
    if (i) out += ",";
    out += to_display(s.inputs[i]);
  }
  return out;
}

}  // namespace sdv
