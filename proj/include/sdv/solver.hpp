#pragma once

#include <string>
#include <vector>

#include "sdv/term.hpp"

namespace sdv {

enum class SatVerdict { Unsat, SatLikely, Unknown };

std::string_view to_string(SatVerdict v);

struct SolveOptions {
  std::string alphabet = "abc";
  std::size_t max_len = 3;
  /// Evaluations tried by the small-model search; 0 disables it.
  std::size_t model_budget = 20000;
};

/// Incomplete satisfiability check of a canonical atom list. Calls (and
/// head/tail applications) are opaque: identical call terms denote the same
/// value, nothing else is assumed about them. Unsat is always sound.
SatVerdict solve(const std::vector<Term>& atoms, const SolveOptions& opts = {});

}  // namespace sdv
