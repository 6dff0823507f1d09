#include "sdv/verify.hpp"

#include "sdv/composition.hpp"

namespace sdv {

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Verified: return "VERIFIED";
    case VerdictKind::Unknown: return "UNKNOWN";
    case VerdictKind::Refuted: return "REFUTED";
  }
  return "UNKNOWN";
}

int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::Verified: return 0;
    case VerdictKind::Unknown: return 1;
    case VerdictKind::Refuted: return 2;
  }
  return 1;
}

Value parse_target(const std::string& text, Sort expected) {
  Value v;
  if (text == "true" || text == "false") {
    v = Value::of_bool(text == "true");
  } else if (text.size() == 3 && text.front() == '\'' && text.back() == '\'') {
    v = Value::of_char(text[1]);
  } else if (text == "eps") {
    v = Value::of_str("");
  } else if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    v = Value::of_str(text.substr(1, text.size() - 2));
  } else {
    throw TypeError("target", "a constant", text);
  }
  if (v.sort != expected) throw TypeError("target", std::string(sort_name(expected)), std::string(sort_name(v.sort)));
  return v;
}

namespace {

std::optional<StateDiagram> product_diagram(const Program& impl, const Program& spec, const Program& composed,
                                            const VerifyOptions& opts, NeighborhoodTree& partial,
                                            std::string& why) {
  auto d1 = build_state_diagram(impl, opts.diagram);
  if (!d1.diagram) {
    why = "no diagram for the implementation: " + d1.diagnostics;
    return std::nullopt;
  }
  auto d2 = build_state_diagram(spec, opts.diagram);
  if (!d2.diagram) {
    why = "no diagram for the specification: " + d2.diagnostics;
    return std::nullopt;
  }
  DiagramSeed seed;
  const auto& u = d1.diagram->tree;
  auto avoid = tree_vars(u);
  for (const auto& pr : d1.diagram->pairs) {
    if (pr.proof->kind != EmbeddingProof::Kind::Justified) continue;
    seed.stored.emplace(pr.leaf, pr.proof->u);
    for (const auto& v : tree_vars(pr.proof->u)) avoid.insert(v);
  }
  seed.outer = rename_apart(d2.diagram->tree, avoid);
  seed.tree = build_product_neighborhood(u, seed.outer, composed, ProductPolicy::InnerFirst,
                                         opts.diagram.probe_depth);
  DiagramOptions dopts = opts.diagram;
  for (auto& pm : premises_of(*d1.diagram)) dopts.pool.push_back(std::move(pm));
  for (auto& pm : premises_of(*d2.diagram)) dopts.pool.push_back(std::move(pm));
  dopts.require_output = true;
  auto r = build_state_diagram(composed, dopts, &seed);
  partial = r.partial;
  if (!r.diagram) why = "product diagram: " + r.diagnostics;
  return r.diagram;
}

}  // namespace

Verdict verify(const Program& impl, const Program* spec, const VerifyOptions& opts) {
  Verdict v;
  v.program = spec ? compose(impl, *spec) : impl;
  if (v.program.main().result != opts.target.sort) {
    throw TypeError("target", std::string(sort_name(v.program.main().result)),
                    std::string(sort_name(opts.target.sort)));
  }
  std::string why;
  if (spec) {
    v.diagram = product_diagram(impl, *spec, v.program, opts, v.partial, why);
    v.from_product = v.diagram.has_value();
  }
  if (!v.diagram) {
    DiagramOptions dopts = opts.diagram;
    dopts.require_output = true;
    auto r = build_state_diagram(v.program, dopts);
    v.diagram = r.diagram;
    v.partial = r.partial;
    if (!r.diagram) why += (why.empty() ? "" : "; ") + std::string("direct: ") + r.diagnostics;
  }
  bool certified = false;
  if (v.diagram) {
    certified = check_theorem3(*v.diagram, v.program, to_term(opts.target));
    if (!certified) why = "a terminal leaf outputs something other than " + to_string(opts.target);
    for (const auto& pr : v.diagram->pairs) {
      if (certified && !output_preserving(*pr.proof)) {
        certified = false;
        why = "embedding at leaf " + std::to_string(pr.leaf) + " does not carry the output";
      }
    }
  }
  v.counterexample = find_counterexample(v.program, opts.target, opts.alphabet, opts.max_len, opts.fuel, opts.jobs);
  if (v.counterexample) {
    v.kind = VerdictKind::Refuted;
    v.reason = "counterexample found by bounded enumeration";
    if (certified) v.warnings.push_back("diagram certified the program but enumeration refutes it");
  } else if (certified) {
    v.kind = VerdictKind::Verified;
    v.reason = "every terminal leaf outputs " + to_string(opts.target);
  } else {
    v.kind = VerdictKind::Unknown;
    v.reason = why;
  }
  return v;
}

}  // namespace sdv
