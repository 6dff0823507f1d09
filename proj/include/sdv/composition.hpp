#pragma once

#include <set>
#include <string>

#include "sdv/neighborhood.hpp"

namespace sdv {

/// ψ(x̄) = φ'(φ(x̄)) followed by the equations of both programs. Functions of
/// `outer` that clash with `inner` get a numeric suffix. Throws TypeError
/// when the outer main does not take exactly the inner result type.
Program compose(const Program& inner, const Program& outer);

/// Renames variables of `t` that occur in `avoid`, except those in `keep`,
/// consistently across every node and label.
NeighborhoodTree rename_apart(const NeighborhoodTree& t, const std::set<std::string>& avoid,
                              const std::set<std::string>& keep = {});
State rename_apart(const State& s, const std::set<std::string>& avoid);

std::set<std::string> tree_vars(const NeighborhoodTree& t);

/// {β ∧ β' ∧ (y = y')}^z_x̄, simplified; `sp` is renamed apart from `s`
/// first if their variables overlap. `sp` must have one input.
State product_state(const State& s, const State& sp);

enum class ProductPolicy { InnerFirst, OuterFirst };

/// Grows the product tree from (root U, root U'): a leaf (i, j) takes the
/// children of i in U if any, otherwise those of j in U'. Contradictory
/// products (solver or a short driving probe on `composed`) are pruned. The
/// variables of U' must be disjoint from those of U.
NeighborhoodTree build_product_neighborhood(const NeighborhoodTree& u, const NeighborhoodTree& up,
                                            const Program& composed,
                                            ProductPolicy policy = ProductPolicy::InnerFirst,
                                            int probe_depth = 2);

}  // namespace sdv
