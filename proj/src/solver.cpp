#include "sdv/solver.hpp"

#include <map>

#include "sdv/evaluator.hpp"

namespace sdv {

std::string_view to_string(SatVerdict v) {
  switch (v) {
    case SatVerdict::Unsat: return "unsat";
    case SatVerdict::SatLikely: return "sat-likely";
    case SatVerdict::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// Replaces every non-constructor subterm (calls, head/tail, ite, and boolean
// structure under =) by an opaque variable; identical terms share one.
class Abstraction {
 public:
  Term data(const Term& t) {
    switch (t->kind) {
      case TermKind::Var:
      case TermKind::CharLit:
      case TermKind::Eps:
      case TermKind::BoolLit: return t;
      case TermKind::Prim:
        if (t->is_prim(Op::Conc)) return conc(data(t->args[0]), data(t->args[1]));
        break;
      case TermKind::Call: break;
    }
    const std::string key = to_source(t);
    auto it = opaque_.find(key);
    if (it != opaque_.end()) return it->second;
    Term v = var("#" + std::to_string(opaque_.size()), t->sort);
    opaque_.emplace(key, v);
    return v;
  }

 private:
  std::map<std::string, Term> opaque_;
};

class Unifier {
 public:
  Term walk(Term t) const {
    while (t->is_var()) {
      auto it = bound_.find(t->name);
      if (it == bound_.end()) break;
      t = it->second;
    }
    return t;
  }

  Term resolve(const Term& t) const {
    Term w = walk(t);
    if (w->is_prim(Op::Conc)) return conc(resolve(w->args[0]), resolve(w->args[1]));
    return w;
  }

  bool unify(const Term& a, const Term& b) {
    Term s = walk(a), t = walk(b);
    if (s->is_var() && t->is_var() && s->name == t->name) return true;
    if (s->is_var()) return bind(s, t);
    if (t->is_var()) return bind(t, s);
    if (s->kind != t->kind) return false;
    switch (s->kind) {
      case TermKind::CharLit: return s->ch == t->ch;
      case TermKind::BoolLit: return s->truth == t->truth;
      case TermKind::Eps: return true;
      case TermKind::Prim: return unify(s->args[0], t->args[0]) && unify(s->args[1], t->args[1]);
      default: return false;
    }
  }

 private:
  bool bind(const Term& v, const Term& t) {
    if (contains(resolve(t), v)) return false;  // occurs check; t != v here
    bound_[v->name] = t;
    return true;
  }

  std::map<std::string, Term> bound_;
};

bool order_conflict(const std::vector<std::pair<Term, Term>>& leqs,
                    const std::vector<std::pair<Term, Term>>& lts,
                    const std::vector<std::pair<Term, Term>>& neqs, const Unifier& u) {
  std::map<std::string, std::size_t> id;
  std::vector<Term> nodes;
  auto node = [&](const Term& t) {
    Term r = u.walk(t);
    std::string key = r->is_var() ? r->name : to_source(r);
    auto [it, fresh] = id.emplace(key, nodes.size());
    if (fresh) nodes.push_back(r);
    return it->second;
  };
  std::vector<std::tuple<std::size_t, std::size_t, int>> edges;
  for (const auto& [a, b] : leqs) edges.emplace_back(node(a), node(b), 1);
  for (const auto& [a, b] : lts) edges.emplace_back(node(a), node(b), 2);
  std::vector<std::pair<std::size_t, std::size_t>> ne;
  for (const auto& [a, b] : neqs) ne.emplace_back(node(a), node(b));
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (nodes[i]->kind == TermKind::CharLit && nodes[j]->kind == TermKind::CharLit &&
          nodes[i]->ch < nodes[j]->ch) {
        edges.emplace_back(i, j, 2);
      }
    }
  }
  // reach[i][j]: 0 unknown, 1 i <= j, 2 i < j.
  std::vector<std::vector<int>> reach(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = 1;
  for (const auto& [a, b, w] : edges) reach[a][b] = std::max(reach[a][b], w);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (reach[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j] == 0) continue;
        reach[i][j] = std::max(reach[i][j], std::max(reach[i][k], reach[k][j]));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (reach[i][i] == 2) return true;
  }
  for (const auto& [a, b] : ne) {
    if (reach[a][b] >= 1 && reach[b][a] >= 1) return true;
  }
  return false;
}

void literal_chars(const Term& t, std::string& out) {
  if (t->kind == TermKind::CharLit && out.find(t->ch) == std::string::npos) out.push_back(t->ch);
  for (const auto& a : t->args) literal_chars(a, out);
}

}  // namespace

SatVerdict solve(const std::vector<Term>& atoms, const SolveOptions& opts) {
  Abstraction abs;
  Unifier u;
  std::vector<std::pair<Term, Term>> leqs, lts, neqs;
  std::vector<Term> plain;  // call-free atoms, for the model search
  for (const auto& a : atoms) {
    if (a->is_false()) return SatVerdict::Unsat;
    if (a->is_true()) continue;
    if (!has_call(a)) plain.push_back(a);
    if (a->is_prim(Op::Eq)) {
      if (!u.unify(abs.data(a->args[0]), abs.data(a->args[1]))) return SatVerdict::Unsat;
    } else if (a->is_prim(Op::Leq)) {
      leqs.emplace_back(abs.data(a->args[0]), abs.data(a->args[1]));
    } else if (a->is_prim(Op::Lt)) {
      lts.emplace_back(abs.data(a->args[0]), abs.data(a->args[1]));
    } else if (a->is_prim(Op::Not) && a->args[0]->is_prim(Op::Eq)) {
      neqs.emplace_back(abs.data(a->args[0]->args[0]), abs.data(a->args[0]->args[1]));
    } else if (a->is_prim(Op::Not)) {
      if (!u.unify(abs.data(a->args[0]), boolean(false))) return SatVerdict::Unsat;
    } else if (a->is_var() || a->is_call()) {
      if (!u.unify(abs.data(a), boolean(true))) return SatVerdict::Unsat;
    }
  }
  for (const auto& [l, r] : neqs) {
    if (term_equal(u.resolve(l), u.resolve(r))) return SatVerdict::Unsat;
  }
  std::vector<std::pair<Term, Term>> char_neqs;
  for (const auto& p : neqs) {
    if (p.first->sort == Sort::Char) char_neqs.push_back(p);
  }
  if (order_conflict(leqs, lts, char_neqs, u)) return SatVerdict::Unsat;

  if (opts.model_budget == 0) return SatVerdict::Unknown;
  if (plain.empty()) return SatVerdict::SatLikely;
  const Term f = conj_all(plain);
  VarSet vs;
  collect_vars(f, vs);
  std::string alphabet = opts.alphabet;
  literal_chars(f, alphabet);
  auto vars = typed_vars(vs);
  if (count_evaluations(vars, alphabet, opts.max_len) > opts.model_budget) return SatVerdict::Unknown;
  bool found = false;
  for_each_evaluation(vars, alphabet, opts.max_len, [&](const Evaluation& xi) {
    auto r = eval_closed(f, xi);
    found = r.defined() && r.value.truth;
    return !found;
  });
  return found ? SatVerdict::SatLikely : SatVerdict::Unknown;
}

}  // namespace sdv
