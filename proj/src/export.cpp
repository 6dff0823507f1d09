#include "sdv/export.hpp"

#include <json.hpp>
#include <sstream>

namespace sdv {

namespace {

using json = nlohmann::ordered_json;

VarSet env_of(const State& s) {
  VarSet env;
  for (const auto& a : s.atoms) collect_vars(a, env);
  if (s.output) collect_vars(s.output, env);
  for (const auto& i : s.inputs) collect_vars(i, env);
  return env;
}

Sort sort_from(const std::string& s) {
  if (s == "C") return Sort::Char;
  if (s == "S") return Sort::Str;
  if (s == "B") return Sort::Bool;
  throw std::runtime_error("unknown sort '" + s + "'");
}

json vars_json(const VarSet& env) {
  json j = json::object();
  for (const auto& [n, s] : env) j[n] = std::string(sort_name(s));
  return j;
}

VarSet vars_from(const json& j) {
  VarSet env;
  for (const auto& [n, s] : j.items()) env.emplace(n, sort_from(s.get<std::string>()));
  return env;
}

json terms_json(const std::vector<Term>& ts) {
  json j = json::array();
  for (const auto& t : ts) j.push_back(to_source(t));
  return j;
}

std::vector<Term> terms_from(const json& j, const VarSet& env, const Program& p) {
  std::vector<Term> out;
  for (const auto& t : j) out.push_back(parse_term(t.get<std::string>(), env, &p));
  return out;
}

json state_json(const State& s) {
  return json{{"conjuncts", terms_json(s.atoms)},
              {"output", to_source(s.output)},
              {"inputs", terms_json(s.inputs)},
              {"vars", vars_json(env_of(s))}};
}

State state_from(const json& j, const Program& p) {
  const VarSet env = vars_from(j.at("vars"));
  State s;
  s.atoms = terms_from(j.at("conjuncts"), env, p);
  s.output = parse_term(j.at("output").get<std::string>(), env, &p);
  s.inputs = terms_from(j.at("inputs"), env, p);
  return s;
}

json clar_json(const Clarification& c) {
  json j = json::array();
  for (const auto& b : c.bindings()) {
    j.push_back({{"var", b.name}, {"sort", std::string(sort_name(b.sort))}, {"term", to_source(b.target)}});
  }
  return j;
}

Clarification clar_from(const json& j, const VarSet& env, const Program& p) {
  Clarification c;
  for (const auto& b : j) {
    c.bind(b.at("var").get<std::string>(), sort_from(b.at("sort").get<std::string>()),
           parse_term(b.at("term").get<std::string>(), env, &p));
  }
  return c;
}

json label_json(const Label& l) {
  VarSet env;
  if (l.formula) collect_vars(l.formula, env);
  if (l.pattern) collect_vars(l.pattern, env);
  switch (l.kind) {
    case Label::Kind::Expansion: return json{{"kind", "expansion"}, {"function", l.function}};
    case Label::Kind::Guard:
      return json{{"kind", "guard"}, {"formula", to_source(l.formula)}, {"positive", l.positive}, {"vars", vars_json(env)}};
    case Label::Kind::StringSplit:
      return json{{"kind", "split"},
                  {"term", to_source(l.formula)},
                  {"pattern", l.pattern ? json(to_source(l.pattern)) : json(nullptr)},
                  {"vars", vars_json(env)}};
  }
  return {};
}

Label label_from(const json& j, const Program& p) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "expansion") return Label::expansion(j.at("function").get<std::string>());
  const VarSet env = vars_from(j.at("vars"));
  if (kind == "guard") {
    return Label::guard(parse_term(j.at("formula").get<std::string>(), env, &p), j.at("positive").get<bool>());
  }
  if (kind == "split") {
    Term pat = j.at("pattern").is_null() ? nullptr : parse_term(j.at("pattern").get<std::string>(), env, &p);
    return Label::split(parse_term(j.at("term").get<std::string>(), env, &p), pat);
  }
  throw std::runtime_error("unknown label kind '" + kind + "'");
}

json tree_json(const NeighborhoodTree& t) {
  json nodes = json::array();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    json labels = json::array();
    for (const auto& l : n.labels) labels.push_back(label_json(l));
    json origin = n.origin ? json::array({n.origin->first, n.origin->second}) : json(nullptr);
    nodes.push_back({{"id", i},
                     {"parent", n.parent},
                     {"children", n.children},
                     {"labels", labels},
                     {"state", state_json(n.state)},
                     {"depth", n.depth},
                     {"terminal", is_terminal(n.state)},
                     {"contradictory", n.contradictory},
                     {"frontier", n.frontier},
                     {"pinned", n.pinned},
                     {"driven", n.driven},
                     {"origin", origin}});
  }
  return nodes;
}

NeighborhoodTree tree_from(const json& j, const Program& p) {
  NeighborhoodTree t;
  for (const auto& jn : j) {
    TreeNode n;
    n.parent = jn.at("parent").get<int>();
    n.children = jn.at("children").get<std::vector<int>>();
    for (const auto& l : jn.at("labels")) n.labels.push_back(label_from(l, p));
    n.state = state_from(jn.at("state"), p);
    n.depth = jn.at("depth").get<int>();
    n.contradictory = jn.at("contradictory").get<bool>();
    n.frontier = jn.at("frontier").get<bool>();
    n.pinned = jn.at("pinned").get<bool>();
    n.driven = jn.at("driven").get<bool>();
    if (!jn.at("origin").is_null()) n.origin = std::make_pair(jn["origin"][0].get<int>(), jn["origin"][1].get<int>());
    t.nodes.push_back(std::move(n));
  }
  return t;
}

json explicit_json(const ExplicitEmbedding& e) {
  return json{{"theta", clar_json(e.theta)}, {"residual", terms_json(e.residual)}};
}

ExplicitEmbedding explicit_from(const json& j, const VarSet& env, const Program& p) {
  return ExplicitEmbedding{clar_from(j.at("theta"), env, p), terms_from(j.at("residual"), env, p)};
}

json proof_json(const EmbeddingProof& pr, const StateDiagram* d) {
  json j{{"kind", std::string(kind_name(pr.kind))}, {"source", state_json(pr.source)}, {"target", state_json(pr.target)}};
  switch (pr.kind) {
    case EmbeddingProof::Kind::Explicit:
      j["embedding"] = explicit_json(pr.explicit_embedding);
      break;
    case EmbeddingProof::Kind::Conditional: {
      const auto& c = pr.conditional;
      json pair = nullptr;
      for (std::size_t k = 0; d && k < d->pairs.size(); ++k) {
        const auto& q = d->pairs[k];
        if (state_equal(c.premise.u, d->tree.nodes[static_cast<std::size_t>(q.leaf)].state) &&
            state_equal(c.premise.u_prime, d->tree.nodes[static_cast<std::size_t>(q.ancestor)].state)) {
          pair = k;
          break;
        }
      }
      j["premise"] = {{"u", state_json(c.premise.u)},
                      {"u_prime", state_json(c.premise.u_prime)},
                      {"discharged_by_goal", pr.discharged_by_goal},
                      {"pair", pair},
                      {"proof", c.premise.proof ? proof_json(*c.premise.proof, nullptr) : json(nullptr)}};
      j["theta"] = clar_json(c.theta);
      j["theta_prime"] = clar_json(c.theta_prime);
      j["r"] = terms_json(c.r);
      j["r_prime"] = terms_json(c.r_prime);
      j["eta"] = explicit_json(c.eta);
      break;
    }
    case EmbeddingProof::Kind::Justified: {
      j["u"] = tree_json(pr.u);
      j["u_prime"] = tree_json(pr.u_prime);
      json obs = json::array();
      for (const auto& o : pr.obligations) {
        obs.push_back({{"leaf", o.leaf}, {"target", o.target}, {"proof", proof_json(*o.proof, nullptr)}});
      }
      j["obligations"] = obs;
      break;
    }
  }
  return j;
}

ProofPtr proof_from(const json& j, const Program& p) {
  auto pr = std::make_shared<EmbeddingProof>();
  const auto kind = j.at("kind").get<std::string>();
  pr->source = state_from(j.at("source"), p);
  pr->target = state_from(j.at("target"), p);
  const VarSet src = env_of(pr->source);
  const VarSet dst = env_of(pr->target);
  if (kind == kind_name(EmbeddingProof::Kind::Explicit)) {
    pr->kind = EmbeddingProof::Kind::Explicit;
    pr->explicit_embedding = explicit_from(j.at("embedding"), src, p);
  } else if (kind == kind_name(EmbeddingProof::Kind::Conditional)) {
    pr->kind = EmbeddingProof::Kind::Conditional;
    const auto& jp = j.at("premise");
    auto& c = pr->conditional;
    c.premise.u = state_from(jp.at("u"), p);
    c.premise.u_prime = state_from(jp.at("u_prime"), p);
    if (!jp.at("proof").is_null()) c.premise.proof = proof_from(jp["proof"], p);
    pr->discharged_by_goal = jp.at("discharged_by_goal").get<bool>();
    c.theta = clar_from(j.at("theta"), src, p);
    c.theta_prime = clar_from(j.at("theta_prime"), dst, p);
    c.r = terms_from(j.at("r"), src, p);
    c.r_prime = terms_from(j.at("r_prime"), dst, p);
    c.eta = explicit_from(j.at("eta"), src, p);
  } else if (kind == kind_name(EmbeddingProof::Kind::Justified)) {
    pr->kind = EmbeddingProof::Kind::Justified;
    pr->u = tree_from(j.at("u"), p);
    pr->u_prime = tree_from(j.at("u_prime"), p);
    for (const auto& o : j.at("obligations")) {
      pr->obligations.push_back({o.at("leaf").get<int>(), o.at("target").get<int>(), proof_from(o.at("proof"), p)});
    }
  } else {
    throw std::runtime_error("unknown proof kind '" + kind + "'");
  }
  return pr;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string node_label(const State& s) {
  std::string out;
  for (const auto& a : s.atoms) out += dot_escape(to_display(a)) + "\\n";
  if (s.atoms.empty()) out += "∅\\n";
  out += "out: " + dot_escape(to_display(s.output)) + "\\nin: ";
  for (std::size_t i = 0; i < s.inputs.size(); ++i) out += (i ? ", " : "") + dot_escape(to_display(s.inputs[i]));
  return out;
}

void dot_tree(std::ostringstream& os, const NeighborhoodTree& t) {
  os << "  node [shape=ellipse, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    os << "  n" << i << " [label=\"" << node_label(n.state) << "\"";
    if (i == 0) os << ", peripheries=2";
    if (n.contradictory) os << ", shape=box, style=filled, fillcolor=lightgray";
    os << "];\n";
  }
  for (std::size_t i = 1; i < t.nodes.size(); ++i) {
    os << "  n" << t.nodes[i].parent << " -> n" << i << " [label=\"" << dot_escape(to_display(t.nodes[i].labels))
       << "\"];\n";
  }
}

}  // namespace

std::string export_dot(const NeighborhoodTree& t) {
  std::ostringstream os;
  os << "digraph neighborhood {\n";
  dot_tree(os, t);
  os << "}\n";
  return os.str();
}

std::string export_dot(const StateDiagram& d) {
  std::ostringstream os;
  os << "digraph diagram {\n";
  dot_tree(os, d.tree);
  for (const auto& pr : d.pairs) {
    os << "  n" << pr.leaf << " -> n" << pr.ancestor << " [style=dashed, label=\"⊆\", constraint=false];\n";
  }
  os << "}\n";
  return os.str();
}

std::string export_json(const StateDiagram& d) {
  json embeddings = json::array();
  for (const auto& pr : d.pairs) {
    embeddings.push_back({{"leaf", pr.leaf}, {"ancestor", pr.ancestor}, {"proof", proof_json(*pr.proof, &d)}});
  }
  json j{{"format", "sdverify-diagram"},
         {"version", 1},
         {"states", tree_json(d.tree)},
         {"open_leaves", d.open_leaves},
         {"embeddings", embeddings}};
  return j.dump(2) + "\n";
}

StateDiagram import_json(const std::string& text, const Program& p) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "sdverify-diagram") throw std::runtime_error("not a diagram dump");
    StateDiagram d;
    d.tree = tree_from(j.at("states"), p);
    d.open_leaves = j.at("open_leaves").get<std::vector<int>>();
    for (const auto& e : j.at("embeddings")) {
      d.pairs.push_back({e.at("leaf").get<int>(), e.at("ancestor").get<int>(), proof_from(e.at("proof"), p)});
    }
    return d;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed diagram JSON: ") + e.what());
  }
}

}  // namespace sdv
