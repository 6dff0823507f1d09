#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdv/neighborhood.hpp"

namespace sdv {

/// β_s = β_{s'}[θ] ∧ residual, as atom multisets; residual is call-free.
struct ExplicitEmbedding {
  Clarification theta;
  std::vector<Term> residual;
};

/// Matches `pattern` atoms (under an extension of `theta`) onto distinct
/// atoms of `subject`. Equalities match in either orientation. Returns the
/// unmatched subject atoms, or nothing.
std::optional<std::vector<Term>> match_atoms(const std::vector<Term>& pattern,
                                              const std::vector<Term>& subject, Clarification& theta,
                                              bool residual_call_free);

/// With `bind_output`, θ is seeded so that y_{target}[θ] = y_s.
std::optional<ExplicitEmbedding> find_explicit(const State& s, const State& target, bool bind_output = false);

struct EmbeddingProof;

struct Premise {
  State u;
  State u_prime;
  std::shared_ptr<const EmbeddingProof> proof;  // null when discharged by the goal
};

/// β_s = u[θ] ∧ r, β_{s'} = u'[θ'] ∧ r', and η: r ↪ r'.
struct ConditionalEmbedding {
  Premise premise;
  Clarification theta;
  Clarification theta_prime;
  std::vector<Term> r;
  std::vector<Term> r_prime;
  ExplicitEmbedding eta;
};

/// Candidate premises; an empty premise (no atoms) gives the degenerate
/// conditional embedding that reduces to an explicit one.
std::optional<ConditionalEmbedding> find_conditional(const State& s, const State& target,
                                                     const std::vector<Premise>& pool);

struct Obligation {
  int leaf = 0;    // node id in U
  int target = 0;  // node id in U'
  std::shared_ptr<const EmbeddingProof> proof;
};

struct EmbeddingProof {
  enum class Kind { Explicit, Conditional, Justified };
  Kind kind = Kind::Explicit;
  State source;
  State target;
  ExplicitEmbedding explicit_embedding;
  ConditionalEmbedding conditional;
  bool discharged_by_goal = false;  // Conditional whose premise is the enclosing goal
  NeighborhoodTree u;               // Justified
  NeighborhoodTree u_prime;
  std::vector<Obligation> obligations;
};

using ProofPtr = std::shared_ptr<const EmbeddingProof>;

struct EmbedOptions {
  int max_depth = 3;  // per side, for justified neighborhoods
  std::size_t max_nodes = 200;
};

ProofPtr explicit_proof(const State& s, const State& target, ExplicitEmbedding e);
ProofPtr conditional_proof(const State& s, const State& target, ConditionalEmbedding c, bool by_goal);

/// Every open leaf of some U ∈ U_s embeds into a node of some U' ∈ U_{s'},
/// explicitly or conditionally with the premise (s, s') or one from `pool`.
ProofPtr check_justified(const State& s, const State& target, const Program& p,
                         const std::vector<Premise>& pool = {}, const EmbedOptions& opts = {});

/// Explicit, else justified, else conditional with a pool premise.
ProofPtr embedded(const State& s, const State& target, const Program& p,
                  const std::vector<Premise>& pool = {}, const EmbedOptions& opts = {});

/// Replays a proof without searching: multiset equations, residual
/// call-freeness, tree shapes and discharges. Returns an error message.
std::optional<std::string> check_proof(const EmbeddingProof& proof, const Program& p,
                                       const std::optional<std::pair<State, State>>& goal = std::nullopt);

/// y_source = y_target under the proof's clarification (η for conditional
/// proofs); justified proofs need equal outputs and preserving obligations.
/// This is what lets terminal outputs speak for embedded leaves.
bool output_preserving(const EmbeddingProof& proof);

std::string to_display(const Clarification& theta);
std::string_view kind_name(EmbeddingProof::Kind k);

}  // namespace sdv
