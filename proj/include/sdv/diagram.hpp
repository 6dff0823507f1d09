#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdv/embedding.hpp"
#include "sdv/evaluator.hpp"

namespace sdv {

struct EmbeddingPair {
  int leaf = 0;
  int ancestor = 0;
  ProofPtr proof;
};

/// (U, N, I): a neighborhood of the initial state, its open leaves, and one
/// embedding into an ancestor for each of them.
struct StateDiagram {
  NeighborhoodTree tree;
  std::vector<int> open_leaves;
  std::vector<EmbeddingPair> pairs;
};

class InvalidDiagram : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiagramOptions {
  Limits limits{6, 2000};
  EmbedOptions embed;
  std::vector<Premise> pool;  // extra premises for conditional embeddings
  int probe_depth = 2;
  // Certification mode: leaves close only by output-preserving explicit or
  // pool-conditional embeddings; no justified embeddings at the frontier.
  bool require_output = false;
};

/// Starting tree for the builder, e.g. a product neighborhood. `stored` maps
/// node ids of the inner tree to neighborhoods that may replace a leaf's
/// missing subtree (nodes with origin (i, j) and stored[i] get extended).
struct DiagramSeed {
  NeighborhoodTree tree;
  NeighborhoodTree outer;  // the U' the product was built from
  std::map<int, NeighborhoodTree> stored;
};

struct DiagramResult {
  std::optional<StateDiagram> diagram;
  NeighborhoodTree partial;  // last attempt, for diagnostics
  std::string diagnostics;
};

/// Iterative deepening over depths 2, 4, ... up to limits.max_depth. Each
/// round first closes leaves by explicit or pool-conditional embeddings into
/// ancestors (nearest first) and drives the rest; leaves stopped at the depth
/// bound then get a justified embedding or the round fails.
DiagramResult build_state_diagram(const Program& p, const DiagramOptions& opts = {},
                                  const DiagramSeed* seed = nullptr);

/// Re-checks every invariant and every proof without searching.
std::optional<std::string> validate_diagram(const StateDiagram& d, const Program& p);

/// Every terminal leaf outputs `target`. Throws InvalidDiagram.
bool check_theorem3(const StateDiagram& d, const Program& p, const Term& target);

struct Counterexample {
  std::vector<Value> inputs;
  Value output;
};

/// First input, in length-then-lexicographic order over `alphabet`, whose
/// evaluation is defined and differs from `target`. Work is split over
/// `jobs` threads; the smallest index wins.
std::optional<Counterexample> find_counterexample(const Program& p, const Value& target,
                                                  const std::string& alphabet, int max_len,
                                                  std::size_t fuel, int jobs = 1);

/// Premises from a diagram's pairs, usable in another diagram's pool.
std::vector<Premise> premises_of(const StateDiagram& d);

}  // namespace sdv
