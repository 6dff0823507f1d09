#include "sdv/composition.hpp"

#include <deque>
#include <map>

namespace sdv {

namespace {

Term rename_calls(const Term& t, const std::map<std::string, std::string>& names) {
  if (t->kind != TermKind::Prim && t->kind != TermKind::Call) return t;
  std::vector<Term> args;
  for (const auto& a : t->args) args.push_back(rename_calls(a, names));
  if (t->is_call()) {
    auto it = names.find(t->name);
    return call(it == names.end() ? t->name : it->second, t->sort, std::move(args));
  }
  return prim(t->op, std::move(args));
}

std::map<std::string, std::string> var_renaming(const std::set<std::string>& mine,
                                                const std::set<std::string>& avoid,
                                                const std::set<std::string>& keep) {
  std::set<std::string> taken = avoid;
  taken.insert(mine.begin(), mine.end());
  std::map<std::string, std::string> out;
  for (const auto& n : mine) {
    if (!avoid.contains(n) || keep.contains(n)) continue;
    std::string fresh = fresh_var(n, taken);
    taken.insert(fresh);
    out.emplace(n, fresh);
  }
  return out;
}

Term rename_vars(const Term& t, const std::map<std::string, std::string>& names) {
  if (!t) return t;
  if (t->is_var()) {
    auto it = names.find(t->name);
    return it == names.end() ? t : var(it->second, t->sort);
  }
  if (t->kind != TermKind::Prim && t->kind != TermKind::Call) return t;
  std::vector<Term> args;
  for (const auto& a : t->args) args.push_back(rename_vars(a, names));
  return t->is_call() ? call(t->name, t->sort, std::move(args)) : prim(t->op, std::move(args));
}

State rename_state(const State& s, const std::map<std::string, std::string>& names) {
  State r = s;
  for (auto& a : r.atoms) a = rename_vars(a, names);
  r.output = rename_vars(r.output, names);
  for (auto& i : r.inputs) i = rename_vars(i, names);
  return r;
}

}  // namespace

Program compose(const Program& inner, const Program& outer) {
  const auto& m = inner.main();
  const auto& om = outer.main();
  if (om.params.size() != 1 || om.params[0].sort != m.result) {
    throw TypeError("composition", "outer main taking one " + std::string(sort_name(m.result)),
                    std::to_string(om.params.size()) + " parameters");
  }
  std::set<std::string> taken;
  for (const auto& e : inner.equations()) taken.insert(e.name);
  std::map<std::string, std::string> names;
  for (const auto& e : outer.equations()) {
    if (taken.contains(e.name)) {
      std::string n = fresh_var(e.name + "_", taken);
      names.emplace(e.name, n);
      taken.insert(n);
    } else {
      taken.insert(e.name);
    }
  }
  std::vector<Equation> eqs;
  Equation psi;
  psi.name = fresh_var("psi", taken);
  psi.params = m.params;
  psi.result = om.result;
  std::vector<Term> args;
  for (const auto& p : m.params) args.push_back(var(p.name, p.sort));
  auto it = names.find(om.name);
  psi.body = call(it == names.end() ? om.name : it->second, om.result, {call(m.name, m.result, args)});
  eqs.push_back(psi);
  for (const auto& e : inner.equations()) eqs.push_back(e);
  for (auto e : outer.equations()) {
    auto n = names.find(e.name);
    if (n != names.end()) e.name = n->second;
    e.body = rename_calls(e.body, names);
    eqs.push_back(std::move(e));
  }
  return Program(std::move(eqs));
}

std::set<std::string> tree_vars(const NeighborhoodTree& t) {
  std::set<std::string> out;
  for (const auto& n : t.nodes) {
    for (const auto& v : state_var_names(n.state)) out.insert(v);
    VarSet vs;
    for (const auto& l : n.labels) {
      if (l.formula) collect_vars(l.formula, vs);
      if (l.pattern) collect_vars(l.pattern, vs);
    }
    for (const auto& [v, _] : vs) out.insert(v);
  }
  return out;
}

NeighborhoodTree rename_apart(const NeighborhoodTree& t, const std::set<std::string>& avoid,
                              const std::set<std::string>& keep) {
  auto names = var_renaming(tree_vars(t), avoid, keep);
  if (names.empty()) return t;
  NeighborhoodTree r = t;
  for (auto& n : r.nodes) {
    n.state = rename_state(n.state, names);
    for (auto& l : n.labels) {
      l.formula = rename_vars(l.formula, names);
      l.pattern = rename_vars(l.pattern, names);
    }
  }
  return r;
}

State rename_apart(const State& s, const std::set<std::string>& avoid) {
  return rename_state(s, var_renaming(state_var_names(s), avoid, {}));
}

State product_state(const State& s, const State& sp0) {
  if (sp0.inputs.size() != 1) throw TermError("product needs a one-input outer state");
  State sp = rename_apart(sp0, state_var_names(s));
  State r;
  r.atoms = s.atoms;
  r.atoms.insert(r.atoms.end(), sp.atoms.begin(), sp.atoms.end());
  if (s.output->sort != sp.inputs[0]->sort) throw TermError("product sort mismatch");
  r.atoms.push_back(eq(s.output, sp.inputs[0]));
  if (s.contradictory() || sp.contradictory()) r.atoms = {boolean(false)};
  r.output = sp.output;
  r.inputs = s.inputs;
  auto avoid = state_var_names(s);
  for (const auto& n : state_var_names(sp)) avoid.insert(n);
  return simplify_state(r, avoid);
}

NeighborhoodTree build_product_neighborhood(const NeighborhoodTree& u, const NeighborhoodTree& up,
                                            const Program& composed, ProductPolicy policy, int probe_depth) {
  NeighborhoodTree t;
  TreeNode root;
  root.state = product_state(u.root().state, up.root().state);
  root.origin = std::make_pair(0, 0);
  t.nodes.push_back(std::move(root));
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    if (refute_node(t, id)) continue;
    if (id != 0 && probe_contradiction(t.nodes[static_cast<std::size_t>(id)].state, composed, probe_depth)) {
      t.nodes[static_cast<std::size_t>(id)].contradictory = true;
      continue;
    }
    const auto [i, j] = *t.nodes[static_cast<std::size_t>(id)].origin;
    const auto& ui = u.nodes[static_cast<std::size_t>(i)];
    const auto& uj = up.nodes[static_cast<std::size_t>(j)];
    const bool inner = !ui.children.empty() && (policy == ProductPolicy::InnerFirst || uj.children.empty());
    const bool outer = !inner && !uj.children.empty();
    if (!inner && !outer) continue;
    const auto& kids = inner ? ui.children : uj.children;
    for (int c : kids) {
      const auto& side = inner ? u.nodes[static_cast<std::size_t>(c)] : up.nodes[static_cast<std::size_t>(c)];
      State ps = inner ? product_state(side.state, uj.state) : product_state(ui.state, side.state);
      int k = t.add_child(id, side.labels, std::move(ps));
      t.nodes[static_cast<std::size_t>(k)].origin = inner ? std::make_pair(c, j) : std::make_pair(i, c);
      queue.push_back(k);
    }
  }
  return reduce(t, ReduceMode::Light);
}

}  // namespace sdv
