#include "sdv/diagram.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <thread>

#include "sdv/composition.hpp"

namespace sdv {

namespace {

struct Builder {
  const Program& p;
  const DiagramOptions& opts;
  const DiagramSeed* seed;
  NeighborhoodTree t;
  std::vector<EmbeddingPair> pairs;
  std::vector<Premise> pool;
  std::string failure;

  TreeNode& node(int id) { return t.nodes[static_cast<std::size_t>(id)]; }

  void pin(int leaf, int anc, ProofPtr proof) {
    node(anc).pinned = true;
    pool.push_back({node(leaf).state, node(anc).state, proof});
    pairs.push_back({leaf, anc, std::move(proof)});
  }

  std::vector<int> targets(int id) {
    std::vector<int> out;
    for (int a : t.ancestors(id)) {
      if (!node(a).contradictory && !is_transient(node(a).state)) out.push_back(a);
    }
    return out;
  }

  bool close_cheap(int id) {
    const State s = node(id).state;
    const auto anc = targets(id);
    for (int a : anc) {
      if (auto e = find_explicit(s, node(a).state, opts.require_output)) {
        auto proof = explicit_proof(s, node(a).state, *e);
        if (opts.require_output && !output_preserving(*proof)) continue;
        pin(id, a, std::move(proof));
        return true;
      }
    }
    if (pool.empty()) return false;
    for (int a : anc) {
      auto c = find_conditional(s, node(a).state, pool);
      if (c && !c->premise.u.atoms.empty()) {
        auto proof = conditional_proof(s, node(a).state, *c, false);
        if (opts.require_output && !output_preserving(*proof)) continue;
        pin(id, a, std::move(proof));
        return true;
      }
    }
    return false;
  }

  bool close_justified(int id) {
    const State s = node(id).state;
    auto anc = targets(id);
    // Most general ancestor first: the root usually gives the smallest proof.
    std::reverse(anc.begin(), anc.end());
    for (int a : anc) {
      if (auto j = check_justified(s, node(a).state, p, pool, opts.embed)) {
        pin(id, a, j);
        return true;
      }
    }
    return false;
  }

  // Children from a stored neighborhood of the inner component.
  bool extend_product(int id, std::deque<int>& queue) {
    if (!seed || !node(id).origin) return false;
    const auto [i, j] = *node(id).origin;
    auto it = seed->stored.find(i);
    if (i < 0 || j < 0 || it == seed->stored.end() || it->second.nodes.size() < 2) return false;
    const auto& outer_state = seed->outer.nodes[static_cast<std::size_t>(j)].state;
    auto avoid = t.path_vars(id);
    for (const auto& v : state_var_names(outer_state)) avoid.insert(v);
    const auto& root_state = it->second.root().state;
    auto keep = state_var_names(root_state);
    for (const auto& v : keep) avoid.erase(v);
    const NeighborhoodTree u = rename_apart(it->second, avoid, keep);
    for (int c : u.root().children) {
      const auto& un = u.nodes[static_cast<std::size_t>(c)];
      int k = t.add_child(id, un.labels, product_state(un.state, outer_state));
      node(k).origin = std::make_pair(-1, j);
      node(k).depth = node(id).depth + 1;
      queue.push_back(k);
    }
    node(id).driven = true;
    return true;
  }

  bool round(int depth) {
    const Limits lim{depth, opts.limits.max_nodes};
    std::deque<int> queue;
    for (int l : t.leaves()) queue.push_back(l);
    std::vector<int> frontier;
    while (!queue.empty()) {
      if (t.nodes.size() > opts.limits.max_nodes) {
        failure = "node limit " + std::to_string(opts.limits.max_nodes) + " reached";
        return false;
      }
      const int id = queue.front();
      queue.pop_front();
      if (node(id).contradictory || refute_node(t, id)) continue;
      const State s = node(id).state;
      if (is_terminal(s)) continue;
      const Step step = choose_step(s, p, t.path_vars(id));
      if (step.kind == Step::Kind::None) continue;
      const bool candidate = step.kind == Step::Kind::Expand && !step.eager && !is_transient(s);
      if (candidate) {
        if (close_cheap(id)) continue;
        if (probe_contradiction(s, p, opts.probe_depth)) {
          node(id).contradictory = true;
          continue;
        }
        if (extend_product(id, queue)) continue;
      }
      if (drive_node(t, id, p, lim)) {
        for (int c : node(id).children) queue.push_back(c);
      } else if (node(id).frontier) {
        frontier.push_back(id);
      }
    }
    for (int id : frontier) {
      if (opts.require_output || !close_justified(id)) {
        failure = "no embedding for leaf " + to_display(node(id).state) + " at depth " + std::to_string(depth);
        return false;
      }
    }
    return true;
  }

  StateDiagram finish() {
    for (std::size_t i = 0; i < t.nodes.size(); ++i) t.nodes[i].tag = static_cast<int>(i);
    StateDiagram d;
    d.tree = reduce(t, ReduceMode::Light);
    std::map<int, int> where;
    for (std::size_t i = 0; i < d.tree.nodes.size(); ++i) where[d.tree.nodes[i].tag] = static_cast<int>(i);
    for (auto& n : d.tree.nodes) n.tag = -1;
    for (auto pr : pairs) {
      auto l = where.find(pr.leaf);
      auto a = where.find(pr.ancestor);
      if (l == where.end() || a == where.end()) continue;
      pr.leaf = l->second;
      pr.ancestor = a->second;
      d.pairs.push_back(std::move(pr));
    }
    std::sort(d.pairs.begin(), d.pairs.end(),
              [](const EmbeddingPair& x, const EmbeddingPair& y) { return x.leaf < y.leaf; });
    for (int l : d.tree.leaves()) {
      if (d.tree.is_open_leaf(l)) d.open_leaves.push_back(l);
    }
    return d;
  }
};

}  // namespace

DiagramResult build_state_diagram(const Program& p, const DiagramOptions& opts, const DiagramSeed* seed) {
  DiagramResult r;
  std::vector<int> schedule;
  for (int d = 2; d < opts.limits.max_depth; d += 2) schedule.push_back(d);
  schedule.push_back(std::max(opts.limits.max_depth, 0));
  for (int depth : schedule) {
    Builder b{p, opts, seed, {}, {}, opts.pool, {}};
    if (seed) {
      b.t = seed->tree;
    } else {
      TreeNode root;
      root.state = initial_state(p);
      b.t.nodes.push_back(std::move(root));
    }
    const bool ok = b.round(depth);
    if (ok) {
      r.diagram = b.finish();
      if (!validate_diagram(*r.diagram, p)) {
        r.partial = r.diagram->tree;
        r.diagnostics.clear();
        return r;
      }
      r.diagnostics = "diagram failed validation: " + *validate_diagram(*r.diagram, p);
      r.diagram.reset();
    } else {
      r.diagnostics = b.failure;
    }
    r.partial = b.t;
  }
  return r;
}

std::optional<std::string> validate_diagram(const StateDiagram& d, const Program& p) {
  if (auto e = validate_tree(d.tree)) return e;
  const auto& t = d.tree;
  std::vector<int> open;
  for (int l : t.leaves()) {
    if (t.is_open_leaf(l)) open.push_back(l);
  }
  if (open != d.open_leaves) return "open leaf set does not match the tree";
  const int n = static_cast<int>(t.nodes.size());
  for (const auto& pr : d.pairs) {
    if (pr.leaf < 0 || pr.leaf >= n || pr.ancestor < 0 || pr.ancestor >= n || !pr.proof) {
      return "embedding pair out of range";
    }
    if (!t.is_open_leaf(pr.leaf)) return "embedding source " + std::to_string(pr.leaf) + " is not an open leaf";
    const auto anc = t.ancestors(pr.leaf);
    if (std::find(anc.begin(), anc.end(), pr.ancestor) == anc.end()) {
      return "embedding target " + std::to_string(pr.ancestor) + " is not an ancestor of " + std::to_string(pr.leaf);
    }
    if (!state_equal(pr.proof->source, t.nodes[static_cast<std::size_t>(pr.leaf)].state) ||
        !state_equal(pr.proof->target, t.nodes[static_cast<std::size_t>(pr.ancestor)].state)) {
      return "proof states differ from the tree at leaf " + std::to_string(pr.leaf);
    }
    if (auto e = check_proof(*pr.proof, p)) return "leaf " + std::to_string(pr.leaf) + ": " + *e;
  }
  for (int l : open) {
    bool covered = std::any_of(d.pairs.begin(), d.pairs.end(), [&](const EmbeddingPair& x) { return x.leaf == l; });
    if (!covered) return "open leaf " + std::to_string(l) + " has no embedding";
  }
  return std::nullopt;
}

bool check_theorem3(const StateDiagram& d, const Program& p, const Term& target) {
  if (auto e = validate_diagram(d, p)) throw InvalidDiagram(*e);
  for (int l : d.tree.leaves()) {
    const auto& n = d.tree.nodes[static_cast<std::size_t>(l)];
    if (n.contradictory || !is_terminal(n.state)) continue;
    const State s = simplify_state(n.state, state_var_names(n.state));
    if (s.contradictory()) continue;
    if (!term_equal(s.output, target)) return false;
  }
  return true;
}

std::optional<Counterexample> find_counterexample(const Program& p, const Value& target,
                                                  const std::string& alphabet, int max_len,
                                                  std::size_t fuel, int jobs) {
  std::vector<TypedVar> vars;
  for (const auto& prm : p.main().params) vars.push_back({prm.name, prm.sort});
  const auto evals = enumerate_evaluations(vars, alphabet, static_cast<std::size_t>(std::max(max_len, 0)));
  std::atomic<std::size_t> best{evals.size()};
  auto args_of = [&](const Evaluation& xi) {
    std::vector<Value> args;
    for (const auto& v : vars) args.push_back(xi.at(v.name));
    return args;
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(jobs, 1));
  auto work = [&](std::size_t k) {
    for (std::size_t i = k; i < evals.size() && i < best.load(); i += workers) {
      auto o = eval_program(p, args_of(evals[i]), fuel);
      if (!o.defined() || o.value == target) continue;
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
      return;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work, k);
    for (auto& th : pool) th.join();
  }
  if (best.load() >= evals.size()) return std::nullopt;
  const auto args = args_of(evals[best.load()]);
  return Counterexample{args, eval_program(p, args, fuel).value};
}

std::vector<Premise> premises_of(const StateDiagram& d) {
  std::vector<Premise> out;
  for (const auto& pr : d.pairs) {
    out.push_back({d.tree.nodes[static_cast<std::size_t>(pr.leaf)].state,
                   d.tree.nodes[static_cast<std::size_t>(pr.ancestor)].state, pr.proof});
  }
  return out;
}

}  // namespace sdv
