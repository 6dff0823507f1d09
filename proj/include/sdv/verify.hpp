#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdv/diagram.hpp"

namespace sdv {

enum class VerdictKind { Verified, Unknown, Refuted };
std::string_view to_string(VerdictKind k);

/// Exit code contract: 0 verified, 1 unknown, 2 refuted.
int exit_code(VerdictKind k);

struct VerifyOptions {
  DiagramOptions diagram;
  Value target = Value::of_bool(true);
  std::string alphabet = "abc";
  int max_len = 6;
  std::size_t fuel = kDefaultFuel;
  int jobs = 1;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  Program program;  // the program whose output is checked (composed when a spec is given)
  std::optional<StateDiagram> diagram;
  std::optional<Counterexample> counterexample;
  NeighborhoodTree partial;
  std::string reason;
  bool from_product = false;  // diagram grew from the product of component diagrams
  std::vector<std::string> warnings;
};

/// Parses `true`, `false`, a char literal `'a'`, `eps` or a double-quoted
/// string. Throws TypeError when the sort differs from `expected`.
Value parse_target(const std::string& text, Sort expected);

/// Checks f = target for `impl`, or spec(impl(x)) = target when `spec` is
/// given. A diagram that satisfies the terminal-output condition is
/// cross-checked by bounded enumeration before Verified is reported.
Verdict verify(const Program& impl, const Program* spec, const VerifyOptions& opts = {});

}  // namespace sdv
