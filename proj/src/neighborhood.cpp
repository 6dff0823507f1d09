#include "sdv/neighborhood.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace sdv {

namespace {

std::optional<Term> selector_in(const Term& g) {
  std::optional<Term> found;
  std::function<void(const Term&)> go = [&](const Term& t) {
    if (found) return;
    if ((t->is_prim(Op::Head) || t->is_prim(Op::Tail)) && t->args[0]->is_var()) {
      found = t->args[0];
      return;
    }
    if (t->is_prim(Op::Ite)) {
      go(t->args[0]);
      return;
    }
    for (const auto& a : t->args) go(a);
  };
  go(g);
  return found;
}

bool clean(const State& s) { return !is_transient(s); }

// x = call with x a variable that is not an argument of another strict call.
bool outermost(const Term& c, const State& s, const std::vector<Term>& calls) {
  for (const auto& a : s.atoms) {
    if (!a->is_prim(Op::Eq) || a->args[1] != c || !a->args[0]->is_var()) continue;
    const Term& x = a->args[0];
    bool inner = std::any_of(calls.begin(), calls.end(), [&](const Term& d) {
      return d != c && std::any_of(d->args.begin(), d->args.end(), [&](const Term& arg) { return contains(arg, x); });
    });
    if (!inner) return true;
  }
  return false;
}

}  // namespace

bool is_transient(const State& s) {
  if (s.contradictory()) return false;
  return strict_ite(s).has_value() || strict_selector_target(s).has_value();
}

Step choose_step(const State& s, const Program& p, const std::set<std::string>& avoid) {
  if (s.contradictory()) return {};
  if (auto it = strict_ite(s)) {
    const Term& g = (*it)->args[0];
    if (auto v = selector_in(g)) return {Step::Kind::Split, *v, false};
    if (g->is_prim(Op::Eq) && g->args[0]->sort == Sort::Str) {
      for (int k = 0; k < 2; ++k) {
        const Term& side = g->args[static_cast<std::size_t>(k)];
        const Term& other = g->args[static_cast<std::size_t>(1 - k)];
        if (side->is_var() && !other->is_var()) return {Step::Kind::Split, side, false};
      }
    }
    return {Step::Kind::Guard, g, false};
  }
  if (auto v = strict_selector_target(s)) return {Step::Kind::Split, *v, false};
  auto calls = strict_calls(s);
  if (calls.empty()) return {};
  for (const auto& c : calls) {
    auto t = expand(s, c, p, avoid);
    if (clean(t.state)) return {Step::Kind::Expand, c, true};
  }
  for (const auto& a : s.atoms) {
    if (!a->is_prim(Op::Eq) || !a->args[1]->is_call() || a->args[0]->is_var()) continue;
    const bool ground = is_ground(a->args[0]);
    return {Step::Kind::Expand, a->args[1], ground};
  }
  for (const auto& c : calls) {
    if (outermost(c, s, calls)) return {Step::Kind::Expand, c, false};
  }
  return {Step::Kind::Expand, calls.front(), false};
}

std::vector<Transition> apply_step(const State& s, const Step& step, const Program& p,
                                   const std::set<std::string>& avoid) {
  switch (step.kind) {
    case Step::Kind::None: return {};
    case Step::Kind::Expand: return {expand(s, step.target, p, avoid)};
    case Step::Kind::Guard: {
      auto [a, b] = split_guard(s, step.target, avoid);
      return {a, b};
    }
    case Step::Kind::Split: {
      auto [a, b] = split_string(s, step.target, avoid);
      return {a, b};
    }
  }
  return {};
}

int NeighborhoodTree::add_child(int parent, std::vector<Label> labels, State s) {
  TreeNode n;
  n.state = std::move(s);
  n.parent = parent;
  n.labels = std::move(labels);
  nodes.push_back(std::move(n));
  const int id = static_cast<int>(nodes.size()) - 1;
  nodes[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

std::vector<int> NeighborhoodTree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].children.empty()) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> NeighborhoodTree::ancestors(int id) const {
  std::vector<int> out;
  for (int p = nodes[static_cast<std::size_t>(id)].parent; p >= 0; p = nodes[static_cast<std::size_t>(p)].parent) {
    out.push_back(p);
  }
  return out;
}

std::set<std::string> NeighborhoodTree::path_vars(int id) const {
  std::set<std::string> out = state_var_names(nodes[static_cast<std::size_t>(id)].state);
  for (int a : ancestors(id)) {
    for (const auto& n : state_var_names(nodes[static_cast<std::size_t>(a)].state)) out.insert(n);
  }
  return out;
}

std::size_t NeighborhoodTree::edge_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }

bool NeighborhoodTree::is_open_leaf(int id) const {
  const auto& n = nodes[static_cast<std::size_t>(id)];
  return n.children.empty() && !n.contradictory && !is_terminal(n.state);
}

bool refute_node(NeighborhoodTree& t, int id) {
  auto& n = t.nodes[static_cast<std::size_t>(id)];
  if (!n.contradictory) {
    n.contradictory = n.state.contradictory() || solve(n.state.atoms, {"abc", 3, 0}) == SatVerdict::Unsat;
  }
  return n.contradictory;
}

bool drive_node(NeighborhoodTree& t, int id, const Program& p, const Limits& limits) {
  if (refute_node(t, id) || !t.nodes[static_cast<std::size_t>(id)].children.empty()) return false;
  const auto avoid = t.path_vars(id);
  const State s = t.nodes[static_cast<std::size_t>(id)].state;
  const int depth = t.nodes[static_cast<std::size_t>(id)].depth;
  Step step = choose_step(s, p, avoid);
  if (step.kind == Step::Kind::None) return false;
  const bool counts = step.kind == Step::Kind::Expand && !step.eager;
  if (counts && depth >= limits.max_depth) {
    t.nodes[static_cast<std::size_t>(id)].frontier = true;
    return false;
  }
  for (auto& tr : apply_step(s, step, p, avoid)) {
    int c = t.add_child(id, {tr.label}, std::move(tr.state));
    t.nodes[static_cast<std::size_t>(c)].depth = depth + (counts ? 1 : 0);
    refute_node(t, c);
  }
  t.nodes[static_cast<std::size_t>(id)].driven = true;
  t.nodes[static_cast<std::size_t>(id)].frontier = false;
  return true;
}

namespace {

void mark_contradictions(const NeighborhoodTree& t, int id, std::vector<bool>& dead) {
  const auto& n = t.nodes[static_cast<std::size_t>(id)];
  bool all = !n.children.empty();
  for (int c : n.children) {
    mark_contradictions(t, c, dead);
    all = all && dead[static_cast<std::size_t>(c)];
  }
  dead[static_cast<std::size_t>(id)] = n.contradictory || all;
}

struct Reducer {
  const NeighborhoodTree& in;
  ReduceMode mode;
  std::vector<bool> dead;
  NeighborhoodTree out;

  std::vector<int> live_children(int id) const {
    std::vector<int> r;
    for (int c : in.nodes[static_cast<std::size_t>(id)].children) {
      if (!dead[static_cast<std::size_t>(c)]) r.push_back(c);
    }
    return r;
  }

  bool splice(int id) const {
    const auto& n = in.nodes[static_cast<std::size_t>(id)];
    if (n.parent < 0 || n.pinned) return false;
    const auto live = live_children(id);
    if (live.empty()) return false;
    if (mode == ReduceMode::Full) return true;
    if (n.origin) return false;
    return is_transient(n.state) || effective_children(id).size() == 1;
  }

  // Children once transient descendants are spliced away.
  std::vector<int> effective_children(int id) const {
    std::vector<int> r;
    for (int c : live_children(id)) {
      const auto& n = in.nodes[static_cast<std::size_t>(c)];
      if (mode == ReduceMode::Light && !n.pinned && !n.origin && is_transient(n.state) &&
          !live_children(c).empty()) {
        auto sub = effective_children(c);
        r.insert(r.end(), sub.begin(), sub.end());
      } else {
        r.push_back(c);
      }
    }
    return r;
  }

  void emit(int id, int new_parent, std::vector<Label> labels) {
    if (splice(id)) {
      for (int c : live_children(id)) {
        auto l = labels;
        const auto& cl = in.nodes[static_cast<std::size_t>(c)].labels;
        l.insert(l.end(), cl.begin(), cl.end());
        emit(c, new_parent, std::move(l));
      }
      return;
    }
    TreeNode copy = in.nodes[static_cast<std::size_t>(id)];
    copy.children.clear();
    copy.labels = std::move(labels);
    copy.parent = new_parent;
    copy.contradictory = dead[static_cast<std::size_t>(id)];
    int me;
    if (new_parent < 0) {
      out.nodes.push_back(std::move(copy));
      me = 0;
    } else {
      out.nodes.push_back(std::move(copy));
      me = static_cast<int>(out.nodes.size()) - 1;
      out.nodes[static_cast<std::size_t>(new_parent)].children.push_back(me);
    }
    for (int c : live_children(id)) emit(c, me, in.nodes[static_cast<std::size_t>(c)].labels);
  }
};

NeighborhoodTree bfs_renumber(const NeighborhoodTree& t) {
  if (t.nodes.empty()) return t;
  std::vector<int> order{0};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int c : t.nodes[static_cast<std::size_t>(order[i])].children) order.push_back(c);
  }
  std::map<int, int> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<int>(i);
  NeighborhoodTree r;
  for (int old : order) {
    TreeNode n = t.nodes[static_cast<std::size_t>(old)];
    n.parent = n.parent < 0 ? -1 : index.at(n.parent);
    for (auto& c : n.children) c = index.at(c);
    r.nodes.push_back(std::move(n));
  }
  return r;
}

}  // namespace

NeighborhoodTree reduce(const NeighborhoodTree& t, ReduceMode mode) {
  if (t.nodes.empty()) return t;
  Reducer r{t, mode, std::vector<bool>(t.nodes.size(), false), {}};
  mark_contradictions(t, 0, r.dead);
  r.emit(0, -1, {});
  return bfs_renumber(r.out);
}

BuildResult build_neighborhood(const State& s, const Program& p, const Limits& limits, ReduceMode mode) {
  BuildResult res;
  TreeNode root;
  root.state = simplify_state(s);
  res.tree.nodes.push_back(std::move(root));
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    if (res.tree.nodes.size() >= limits.max_nodes) {
      res.limit_hit = true;
      res.tree.nodes[static_cast<std::size_t>(id)].frontier = true;
      continue;
    }
    if (drive_node(res.tree, id, p, limits)) {
      for (int c : res.tree.nodes[static_cast<std::size_t>(id)].children) queue.push_back(c);
    } else if (res.tree.nodes[static_cast<std::size_t>(id)].frontier) {
      res.limit_hit = true;
    }
  }
  res.tree = reduce(res.tree, mode);
  return res;
}

bool probe_contradiction(const State& s, const Program& p, int depth, std::size_t max_nodes) {
  if (s.contradictory()) return true;
  auto r = build_neighborhood(s, p, {depth, max_nodes}, ReduceMode::Light);
  return r.tree.root().contradictory;
}

std::optional<std::string> validate_tree(const NeighborhoodTree& t) {
  if (t.nodes.empty()) return "empty tree";
  if (t.nodes[0].parent != -1) return "root has a parent";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    if (i > 0) {
      if (n.parent < 0 || static_cast<std::size_t>(n.parent) >= t.nodes.size()) return "dangling parent";
      const auto& sib = t.nodes[static_cast<std::size_t>(n.parent)].children;
      if (std::count(sib.begin(), sib.end(), static_cast<int>(i)) != 1) return "parent does not list child";
      if (n.labels.empty()) return "unlabeled edge into node " + std::to_string(i);
      if (static_cast<std::size_t>(n.parent) >= i) return "ids not breadth-first";
    }
    for (int c : n.children) {
      if (c <= 0 || static_cast<std::size_t>(c) >= t.nodes.size()) return "dangling child";
      if (t.nodes[static_cast<std::size_t>(c)].parent != static_cast<int>(i)) return "child with wrong parent";
    }
    if (n.contradictory && !n.children.empty()) return "contradictory interior node";
  }
  return std::nullopt;
}

}  // namespace sdv
