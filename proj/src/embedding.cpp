#include "sdv/embedding.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace sdv {

namespace {

using Subst = std::map<std::string, Term>;

bool match_term(const Term& p, const Term& t, Subst& m) {
  if (p->is_var()) {
    auto it = m.find(p->name);
    if (it != m.end()) return term_equal(it->second, t);
    if (t->sort != p->sort || !is_simple(t)) return false;
    m.emplace(p->name, t);
    return true;
  }
  if (p->kind != t->kind || p->sort != t->sort) return false;
  switch (p->kind) {
    case TermKind::CharLit: return p->ch == t->ch;
    case TermKind::BoolLit: return p->truth == t->truth;
    case TermKind::Eps: return true;
    case TermKind::Call:
      if (p->name != t->name) return false;
      break;
    case TermKind::Prim:
      if (p->op != t->op) return false;
      break;
    case TermKind::Var: return false;
  }
  if (p->args.size() != t->args.size()) return false;
  for (std::size_t i = 0; i < p->args.size(); ++i) {
    if (!match_term(p->args[i], t->args[i], m)) return false;
  }
  return true;
}

// Alternatives for matching one atom: direct, and swapped for equalities.
std::vector<Subst> match_atom(const Term& p, const Term& t, const Subst& m) {
  std::vector<Subst> out;
  Subst a = m;
  if (match_term(p, t, a)) out.push_back(std::move(a));
  if (p->is_prim(Op::Eq) && t->is_prim(Op::Eq)) {
    Subst b = m;
    if (match_term(p->args[0], t->args[1], b) && match_term(p->args[1], t->args[0], b)) {
      bool dup = !out.empty() && out.front() == b;
      if (!dup) out.push_back(std::move(b));
    }
  }
  return out;
}

// Enumerates matchings of all pattern atoms onto distinct subject atoms.
// The callback receives the substitution and the unmatched subject atoms
// and returns true to stop. Bounded by `budget` leaves.
void search(const std::vector<Term>& pattern, const std::vector<Term>& subject, std::size_t i,
            std::vector<bool>& used, const Subst& m, std::size_t& budget,
            const std::function<bool(const Subst&, const std::vector<Term>&)>& done, bool& stop) {
  if (stop || budget == 0) return;
  if (i == pattern.size()) {
    --budget;
    std::vector<Term> rest;
    for (std::size_t k = 0; k < subject.size(); ++k) {
      if (!used[k]) rest.push_back(subject[k]);
    }
    stop = done(m, rest);
    return;
  }
  for (std::size_t k = 0; k < subject.size() && !stop; ++k) {
    if (used[k]) continue;
    for (const auto& ext : match_atom(pattern[i], subject[k], m)) {
      used[k] = true;
      search(pattern, subject, i + 1, used, ext, budget, done, stop);
      used[k] = false;
      if (stop) return;
    }
  }
}

void for_each_match(const std::vector<Term>& pattern, const std::vector<Term>& subject, const Subst& init,
                    const std::function<bool(const Subst&, const std::vector<Term>&)>& done) {
  std::vector<bool> used(subject.size(), false);
  std::size_t budget = 4096;
  bool stop = false;
  search(pattern, subject, 0, used, init, budget, done, stop);
}

Clarification to_clarification(const Subst& m, const std::vector<Term>& pattern) {
  std::vector<std::string> order;
  for (const auto& a : pattern) vars_in_order(a, order);
  Clarification c;
  std::set<std::string> seen;
  for (const auto& n : order) {
    auto it = m.find(n);
    if (it == m.end() || !seen.insert(n).second) continue;
    c.bind(n, it->second->sort, it->second);
  }
  return c;
}

Subst from_clarification(const Clarification& c) {
  Subst m;
  for (const auto& b : c.bindings()) m.emplace(b.name, b.target);
  return m;
}

bool call_free(const std::vector<Term>& atoms) {
  return std::none_of(atoms.begin(), atoms.end(), [](const Term& a) { return has_call(a); });
}

}  // namespace

std::optional<std::vector<Term>> match_atoms(const std::vector<Term>& pattern,
                                              const std::vector<Term>& subject, Clarification& theta,
                                              bool residual_call_free) {
  std::optional<std::vector<Term>> result;
  for_each_match(pattern, subject, from_clarification(theta), [&](const Subst& m, const std::vector<Term>& rest) {
    if (residual_call_free && !call_free(rest)) return false;
    theta = to_clarification(m, pattern);
    result = rest;
    return true;
  });
  return result;
}

std::optional<ExplicitEmbedding> find_explicit(const State& s, const State& target, bool bind_output) {
  if (s.contradictory() || target.contradictory()) return std::nullopt;
  Clarification theta;
  if (bind_output) {
    if (s.output->sort != target.output->sort) return std::nullopt;
    if (!match_atoms({eq(target.output, target.output)}, {eq(s.output, s.output)}, theta, false)) {
      return std::nullopt;
    }
  }
  auto rest = match_atoms(target.atoms, s.atoms, theta, true);
  if (!rest) return std::nullopt;
  return ExplicitEmbedding{theta, *rest};
}

std::optional<ConditionalEmbedding> find_conditional(const State& s, const State& target,
                                                     const std::vector<Premise>& pool) {
  if (s.contradictory() || target.contradictory()) return std::nullopt;
  std::vector<Premise> candidates = pool;
  candidates.push_back(Premise{State{{}, s.output, {}}, State{{}, target.output, {}}, nullptr});
  for (const auto& prem : candidates) {
    std::optional<ConditionalEmbedding> found;
    for_each_match(prem.u.atoms, s.atoms, {}, [&](const Subst& m1, const std::vector<Term>& r) {
      for_each_match(prem.u_prime.atoms, target.atoms, {}, [&](const Subst& m2, const std::vector<Term>& r2) {
        Clarification eta;
        auto res = match_atoms(r2, r, eta, true);
        if (!res) return false;
        found = ConditionalEmbedding{prem, to_clarification(m1, prem.u.atoms),
                                     to_clarification(m2, prem.u_prime.atoms), r, r2,
                                     ExplicitEmbedding{eta, *res}};
        return true;
      });
      return found.has_value();
    });
    if (found) return found;
  }
  return std::nullopt;
}

std::string to_display(const Clarification& theta) {
  std::string out = "[";
  bool first = true;
  for (const auto& b : theta.non_identity()) {
    if (!first) out += ", ";
    first = false;
    out += to_display(b.target) + "/" + b.name;
  }
  return out + "]";
}

std::string_view kind_name(EmbeddingProof::Kind k) {
  switch (k) {
    case EmbeddingProof::Kind::Explicit: return "explicit";
    case EmbeddingProof::Kind::Conditional: return "conditional";
    case EmbeddingProof::Kind::Justified: return "justified";
  }
  return "?";
}

ProofPtr explicit_proof(const State& s, const State& t, ExplicitEmbedding e) {
  auto p = std::make_shared<EmbeddingProof>();
  p->kind = EmbeddingProof::Kind::Explicit;
  p->source = s;
  p->target = t;
  p->explicit_embedding = std::move(e);
  return p;
}

ProofPtr conditional_proof(const State& s, const State& t, ConditionalEmbedding c, bool goal) {
  auto p = std::make_shared<EmbeddingProof>();
  p->kind = EmbeddingProof::Kind::Conditional;
  p->source = s;
  p->target = t;
  p->conditional = std::move(c);
  p->discharged_by_goal = goal;
  return p;
}

namespace {

// Obligation for one open leaf: explicit into any U' node, else conditional
// with the goal or a pool premise. The goal only discharges leaves mapped
// strictly below the root of U', so that both sides have made a step.
ProofPtr discharge_leaf(const State& leaf, const NeighborhoodTree& up, const Premise& goal,
                        const std::vector<Premise>& pool, int& target) {
  for (std::size_t j = 0; j < up.nodes.size(); ++j) {
    if (up.nodes[j].contradictory) continue;
    if (auto e = find_explicit(leaf, up.nodes[j].state)) {
      target = static_cast<int>(j);
      return explicit_proof(leaf, up.nodes[j].state, *e);
    }
  }
  for (std::size_t j = 0; j < up.nodes.size(); ++j) {
    if (up.nodes[j].contradictory) continue;
    if (auto c = j > 0 ? find_conditional(leaf, up.nodes[j].state, {goal}) : std::nullopt) {
      if (!c->premise.u.atoms.empty()) {
        target = static_cast<int>(j);
        return conditional_proof(leaf, up.nodes[j].state, *c, true);
      }
    }
    if (pool.empty()) continue;
    if (auto c = find_conditional(leaf, up.nodes[j].state, pool)) {
      target = static_cast<int>(j);
      return conditional_proof(leaf, up.nodes[j].state, *c, false);
    }
  }
  return nullptr;
}

}  // namespace

ProofPtr check_justified(const State& s0, const State& t0, const Program& p,
                         const std::vector<Premise>& pool, const EmbedOptions& opts) {
  const State s = simplify_state(s0);
  const State t = simplify_state(t0);
  if (s.contradictory() || t.contradictory()) return nullptr;
  const Premise goal{s, t, nullptr};
  std::vector<std::pair<int, int>> schedule;
  for (int sum = 2; sum <= 2 * opts.max_depth; ++sum) {
    for (int du = std::min(sum - 1, opts.max_depth); du >= 1 && sum - du <= opts.max_depth; --du) {
      schedule.emplace_back(du, sum - du);
    }
  }
  std::map<int, NeighborhoodTree> cache_u, cache_up;
  auto tree = [&](std::map<int, NeighborhoodTree>& cache, const State& root, int d) -> const NeighborhoodTree& {
    auto it = cache.find(d);
    if (it == cache.end()) {
      it = cache.emplace(d, build_neighborhood(root, p, {d, opts.max_nodes}, ReduceMode::Full).tree).first;
    }
    return it->second;
  };
  for (const auto& [du, dup] : schedule) {
    const auto& u = tree(cache_u, s, du);
    if (u.nodes.size() == 1 && !is_terminal(s)) continue;
    const auto& up = tree(cache_up, t, dup);
    auto proof = std::make_shared<EmbeddingProof>();
    proof->kind = EmbeddingProof::Kind::Justified;
    proof->source = s;
    proof->target = t;
    bool ok = true;
    for (int leaf : u.leaves()) {
      if (!u.is_open_leaf(leaf)) continue;
      int target = -1;
      auto sub = discharge_leaf(u.nodes[static_cast<std::size_t>(leaf)].state, up, goal, pool, target);
      if (!sub) {
        ok = false;
        break;
      }
      proof->obligations.push_back({leaf, target, sub});
    }
    if (!ok) continue;
    proof->u = u;
    proof->u_prime = up;
    return proof;
  }
  return nullptr;
}

bool output_preserving(const EmbeddingProof& proof) {
  const auto& src = proof.source.output;
  const auto& dst = proof.target.output;
  switch (proof.kind) {
    case EmbeddingProof::Kind::Explicit:
      return term_equal(src, apply_clarification(dst, proof.explicit_embedding.theta));
    case EmbeddingProof::Kind::Conditional: {
      // Where each target variable lands in the source: through η for the
      // r' part, through the premise's own clarification for the u' part.
      const auto& c = proof.conditional;
      std::map<std::string, Term> rho;
      for (const auto& b : c.eta.theta.bindings()) rho[b.name] = b.target;
      const auto* pp = c.premise.proof.get();
      if (pp && pp->kind == EmbeddingProof::Kind::Explicit) {
        VarSet uv;
        for (const auto& a : c.premise.u_prime.atoms) collect_vars(a, uv);
        for (const auto& [w, sort] : uv) {
          const Term img = apply_clarification(var(w, sort), c.theta_prime);
          const Term there =
              apply_clarification(apply_clarification(var(w, sort), pp->explicit_embedding.theta), c.theta);
          Clarification m;
          if (!match_atoms({eq(img, img)}, {eq(there, there)}, m, false)) return false;
          for (const auto& b : m.bindings()) {
            auto [it, fresh] = rho.emplace(b.name, b.target);
            if (!fresh && !term_equal(it->second, b.target)) return false;
          }
        }
      }
      VarSet dv;
      collect_vars(dst, dv);
      std::vector<std::pair<Term, Term>> pairs;
      for (const auto& [v, sort] : dv) {
        auto it = rho.find(v);
        if (it == rho.end()) return false;
        pairs.emplace_back(var(v, sort), it->second);
      }
      return term_equal(src, substitute(dst, pairs));
    }
    case EmbeddingProof::Kind::Justified:
      if (!term_equal(src, dst)) return false;
      return std::all_of(proof.obligations.begin(), proof.obligations.end(),
                         [](const Obligation& o) { return o.proof && output_preserving(*o.proof); });
  }
  return false;
}

ProofPtr embedded(const State& s, const State& t, const Program& p, const std::vector<Premise>& pool,
                  const EmbedOptions& opts) {
  if (auto e = find_explicit(s, t)) return explicit_proof(s, t, *e);
  if (auto j = check_justified(s, t, p, pool, opts)) return j;
  if (!pool.empty()) {
    if (auto c = find_conditional(s, t, pool)) {
      if (!c->premise.u.atoms.empty()) return conditional_proof(s, t, *c, false);
    }
  }
  return nullptr;
}

namespace {

bool same_atom(const Term& a, const Term& b) {
  if (term_equal(a, b)) return true;
  return a->is_prim(Op::Eq) && b->is_prim(Op::Eq) && term_equal(a->args[0], b->args[1]) &&
         term_equal(a->args[1], b->args[0]);
}

// mapped ⊎ rest = whole, as multisets modulo equality orientation.
bool multiset_split(const std::vector<Term>& whole, const std::vector<Term>& mapped, const std::vector<Term>& rest) {
  if (whole.size() != mapped.size() + rest.size()) return false;
  std::vector<bool> used(whole.size(), false);
  auto take = [&](const Term& x) {
    for (std::size_t i = 0; i < whole.size(); ++i) {
      if (!used[i] && same_atom(whole[i], x)) {
        used[i] = true;
        return true;
      }
    }
    return false;
  };
  for (const auto& m : mapped) {
    if (!take(m)) return false;
  }
  for (const auto& r : rest) {
    if (!take(r)) return false;
  }
  return true;
}

std::vector<Term> apply_all(const std::vector<Term>& atoms, const Clarification& c) {
  std::vector<Term> out;
  for (const auto& a : atoms) out.push_back(apply_clarification(a, c));
  return out;
}

std::optional<std::string> check_explicit(const std::vector<Term>& source, const std::vector<Term>& target,
                                          const ExplicitEmbedding& e) {
  if (!call_free(e.residual)) return "residual mentions a functional variable";
  if (!multiset_split(source, apply_all(target, e.theta), e.residual)) return "explicit multiset equation fails";
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_proof(const EmbeddingProof& pr, const Program& p,
                                       const std::optional<std::pair<State, State>>& goal) {
  switch (pr.kind) {
    case EmbeddingProof::Kind::Explicit:
      return check_explicit(pr.source.atoms, pr.target.atoms, pr.explicit_embedding);
    case EmbeddingProof::Kind::Conditional: {
      const auto& c = pr.conditional;
      if (!multiset_split(pr.source.atoms, apply_all(c.premise.u.atoms, c.theta), c.r)) return "source split fails";
      if (!multiset_split(pr.target.atoms, apply_all(c.premise.u_prime.atoms, c.theta_prime), c.r_prime)) {
        return "target split fails";
      }
      if (auto err = check_explicit(c.r, c.r_prime, c.eta)) return "eta: " + *err;
      if (c.premise.u.atoms.empty() && c.premise.u_prime.atoms.empty()) return std::nullopt;
      if (pr.discharged_by_goal) {
        if (!goal) return "goal discharge outside a justified proof";
        if (!state_equal(c.premise.u, goal->first) || !state_equal(c.premise.u_prime, goal->second)) {
          return "premise is not the goal";
        }
        return std::nullopt;
      }
      if (!c.premise.proof) return "premise without proof";
      if (!state_equal(c.premise.proof->source, c.premise.u) || !state_equal(c.premise.proof->target, c.premise.u_prime)) {
        return "premise proof is about other states";
      }
      return check_proof(*c.premise.proof, p);
    }
    case EmbeddingProof::Kind::Justified: {
      if (auto e = validate_tree(pr.u)) return "U: " + *e;
      if (auto e = validate_tree(pr.u_prime)) return "U': " + *e;
      if (!state_equal(pr.u.root().state, pr.source)) return "U is not rooted at the source";
      if (!state_equal(pr.u_prime.root().state, pr.target)) return "U' is not rooted at the target";
      if (!is_terminal(pr.source) && pr.u.nodes.size() < 2) return "U has no transitions";
      std::set<int> covered;
      for (const auto& o : pr.obligations) {
        if (o.leaf <= 0 || static_cast<std::size_t>(o.leaf) >= pr.u.nodes.size() || !pr.u.is_leaf(o.leaf)) {
          return "obligation on a non-leaf";
        }
        if (o.target < 0 || static_cast<std::size_t>(o.target) >= pr.u_prime.nodes.size()) return "bad target";
        if (!o.proof) return "missing sub-proof";
        if (!state_equal(o.proof->source, pr.u.nodes[static_cast<std::size_t>(o.leaf)].state) ||
            !state_equal(o.proof->target, pr.u_prime.nodes[static_cast<std::size_t>(o.target)].state)) {
          return "sub-proof about other states";
        }
        if (o.target == 0 && o.proof->kind == EmbeddingProof::Kind::Conditional && o.proof->discharged_by_goal) {
          return "goal discharged at the root of U'";
        }
        if (auto e = check_proof(*o.proof, p, std::make_pair(pr.source, pr.target))) return "leaf: " + *e;
        covered.insert(o.leaf);
      }
      for (int leaf : pr.u.leaves()) {
        if (pr.u.is_open_leaf(leaf) && !covered.contains(leaf)) return "open leaf without obligation";
      }
      return std::nullopt;
    }
  }
  return "unknown proof kind";
}

}  // namespace sdv
