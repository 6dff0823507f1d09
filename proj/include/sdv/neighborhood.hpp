#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdv/state.hpp"

namespace sdv {

/// What the driving strategy does next at a state.
struct Step {
  enum class Kind { None, Expand, Guard, Split };
  Kind kind = Kind::None;
  Term target;         // call, guard or string term
  bool eager = false;  // expansion that does not count toward depth
};

Step choose_step(const State& s, const Program& p, const std::set<std::string>& avoid = {});
std::vector<Transition> apply_step(const State& s, const Step& step, const Program& p,
                                   const std::set<std::string>& avoid = {});

/// An if-term or an undetermined string shape is still pending.
bool is_transient(const State& s);

struct TreeNode {
  State state;
  int parent = -1;
  std::vector<Label> labels;  // edge from parent
  std::vector<int> children;
  int depth = 0;              // non-eager expansions from the root
  bool contradictory = false;
  bool frontier = false;  // stopped by a limit
  bool pinned = false;    // survives splicing (embedding targets)
  bool driven = false;    // children came from apply_step on this node
  std::optional<std::pair<int, int>> origin;  // product nodes: (U node, U' node)
  int tag = -1;                               // caller bookkeeping, kept by reduce
};

class NeighborhoodTree {
 public:
  std::vector<TreeNode> nodes;

  const TreeNode& root() const { return nodes.front(); }
  int add_child(int parent, std::vector<Label> labels, State s);
  std::vector<int> leaves() const;
  std::vector<int> ancestors(int id) const;  // nearest first, excluding id
  std::set<std::string> path_vars(int id) const;
  std::size_t edge_count() const;
  bool is_leaf(int id) const { return nodes[static_cast<std::size_t>(id)].children.empty(); }
  /// Leaf that is neither terminal nor contradictory.
  bool is_open_leaf(int id) const;
};

struct Limits {
  int max_depth = 12;
  std::size_t max_nodes = 500;
};

enum class ReduceMode {
  Light,  // splice transient nodes and single-successor intermediates
  Full,   // splice every unpinned interior node into its parent
};

/// Removes contradictory subtrees (propagating upward when all children of a
/// node are contradictory), splices per mode, and renumbers breadth-first.
NeighborhoodTree reduce(const NeighborhoodTree& t, ReduceMode mode = ReduceMode::Light);

/// Grows one node by the driving strategy; returns false if nothing applies
/// or the depth limit stops it (the node is then marked frontier).
bool drive_node(NeighborhoodTree& t, int id, const Program& p, const Limits& limits);

/// Marks node contradictory if solve reports Unsat.
bool refute_node(NeighborhoodTree& t, int id);

struct BuildResult {
  NeighborhoodTree tree;
  bool limit_hit = false;
};

BuildResult build_neighborhood(const State& s, const Program& p, const Limits& limits,
                               ReduceMode mode = ReduceMode::Light);

/// Short bounded driving from s; true when every branch ends contradictory.
bool probe_contradiction(const State& s, const Program& p, int depth = 2, std::size_t max_nodes = 64);

/// Structural invariants: parent/children consistency, labels on every
/// non-root edge, contradictory nodes only as leaves.
std::optional<std::string> validate_tree(const NeighborhoodTree& t);

}  // namespace sdv
