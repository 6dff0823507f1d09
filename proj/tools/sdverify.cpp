#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "sdv/composition.hpp"
#include "sdv/export.hpp"
#include "sdv/verify.hpp"

namespace {

constexpr int kInputError = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sdv::Program load(const std::string& path) {
  try {
    return sdv::parse_program(read_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw InputError("cannot write " + path);
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("sdverify");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("SDVERIFY_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

struct Common {
  int max_depth = 6;
  int max_nodes = 2000;
  int fuel = static_cast<int>(sdv::kDefaultFuel);
  std::string alphabet = "abc";
  int max_len = 6;
  int jobs = 1;
  std::string dot;
  std::string json;
};

void add_limits(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-depth", c.max_depth, "Depth bound in non-eager expansions")->check(CLI::PositiveNumber);
  cmd->add_option("--max-nodes", c.max_nodes, "Node budget per tree")->check(CLI::PositiveNumber);
  cmd->add_option("--dot", c.dot, "Write the diagram as Graphviz");
  cmd->add_option("--json", c.json, "Write the diagram as JSON");
}

void add_search(CLI::App* cmd, Common& c) {
  cmd->add_option("--fuel", c.fuel, "Call unfoldings per evaluation")->check(CLI::PositiveNumber);
  cmd->add_option("--alphabet", c.alphabet, "Characters for enumeration");
  cmd->add_option("--max-len", c.max_len, "Longest enumerated string")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", c.jobs, "Worker threads for enumeration")->check(CLI::PositiveNumber);
}

void check_alphabet(const std::string& a) {
  if (a.empty()) throw InputError("alphabet must not be empty");
  if (std::set<char>(a.begin(), a.end()).size() != a.size()) throw InputError("alphabet has repeated characters");
}

sdv::DiagramOptions diagram_options(const Common& c) {
  sdv::DiagramOptions o;
  o.limits.max_depth = c.max_depth;
  o.limits.max_nodes = static_cast<std::size_t>(c.max_nodes);
  return o;
}

void write_outputs(const Common& c, const sdv::StateDiagram* d, const sdv::NeighborhoodTree& partial) {
  if (!c.dot.empty()) write_file(c.dot, d ? sdv::export_dot(*d) : sdv::export_dot(partial));
  if (!c.json.empty() && d) write_file(c.json, sdv::export_json(*d));
}

std::string summary(const sdv::StateDiagram& d) {
  std::size_t terminal = 0;
  for (int l : d.tree.leaves()) {
    if (!d.tree.is_open_leaf(l) && !d.tree.nodes[static_cast<std::size_t>(l)].contradictory) ++terminal;
  }
  std::ostringstream os;
  os << "diagram: " << d.tree.nodes.size() << " states, " << d.tree.edge_count() << " transitions, " << terminal
     << " terminal leaves, " << d.open_leaves.size() << " open leaves, " << d.pairs.size() << " embeddings";
  return os.str();
}

std::string inputs_text(const std::vector<sdv::Value>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? " " : "") + sdv::to_string(vs[i]);
  return out;
}

sdv::Value parse_input(const std::string& text, sdv::Sort s) {
  switch (s) {
    case sdv::Sort::Str: return sdv::Value::of_str(text == "eps" ? "" : text);
    case sdv::Sort::Char:
      if (text.size() == 1) return sdv::Value::of_char(text[0]);
      if (text.size() == 3 && text.front() == '\'' && text.back() == '\'') return sdv::Value::of_char(text[1]);
      break;
    case sdv::Sort::Bool:
      if (text == "true" || text == "false") return sdv::Value::of_bool(text == "true");
      break;
  }
  throw InputError("input '" + text + "' is not a " + std::string(sdv::sort_name(s)));
}

int run_check(const std::string& program, const std::string& spec, const std::string& target, const Common& c) {
  check_alphabet(c.alphabet);
  const auto impl = load(program);
  std::optional<sdv::Program> sp;
  if (!spec.empty()) sp = load(spec);
  sdv::VerifyOptions o;
  o.diagram = diagram_options(c);
  o.alphabet = c.alphabet;
  o.max_len = c.max_len;
  o.fuel = static_cast<std::size_t>(c.fuel);
  o.jobs = c.jobs;
  const sdv::Program checked = sp ? sdv::compose(impl, *sp) : impl;
  try {
    o.target = sdv::parse_target(target, checked.main().result);
  } catch (const std::exception& e) {
    throw InputError(std::string("bad --target: ") + e.what());
  }
  spdlog::info("checking {} against {}", program, spec.empty() ? "its own output" : spec);
  const auto v = sdv::verify(impl, sp ? &*sp : nullptr, o);
  for (const auto& w : v.warnings) spdlog::warn("{}", w);
  std::cout << sdv::to_string(v.kind) << "\n";
  std::cout << "reason: " << v.reason << "\n";
  if (v.diagram) std::cout << summary(*v.diagram) << (v.from_product ? " (from product neighborhoods)" : "") << "\n";
  if (v.counterexample) {
    std::cout << "witness: " << inputs_text(v.counterexample->inputs) << " -> "
              << sdv::to_string(v.counterexample->output) << "\n";
  }
  write_outputs(c, v.diagram ? &*v.diagram : nullptr, v.partial);
  return sdv::exit_code(v.kind);
}

int run_diagram(const std::string& program, const Common& c) {
  const auto p = load(program);
  const auto r = sdv::build_state_diagram(p, diagram_options(c));
  write_outputs(c, r.diagram ? &*r.diagram : nullptr, r.partial);
  if (!r.diagram) {
    std::cout << "NOT FOUND\nreason: " << r.diagnostics << "\n";
    return 1;
  }
  if (c.dot.empty() && c.json.empty()) {
    std::cout << sdv::export_json(*r.diagram);
    return 0;
  }
  std::cout << summary(*r.diagram) << "\n";
  for (const auto& pr : r.diagram->pairs) {
    std::cout << "  " << pr.leaf << " -> " << pr.ancestor << " " << sdv::kind_name(pr.proof->kind) << "\n";
  }
  return 0;
}

int run_eval(const std::string& program, const std::vector<std::string>& inputs, int fuel) {
  const auto p = load(program);
  const auto& params = p.main().params;
  if (inputs.size() != params.size()) {
    throw InputError(p.main().name + " takes " + std::to_string(params.size()) + " inputs, got " +
                     std::to_string(inputs.size()));
  }
  std::vector<sdv::Value> args;
  for (std::size_t i = 0; i < inputs.size(); ++i) args.push_back(parse_input(inputs[i], params[i].sort));
  const auto o = sdv::eval_program(p, args, static_cast<std::size_t>(fuel));
  if (!o.defined()) {
    std::cout << sdv::to_string(o) << "\n";
    return 1;
  }
  std::cout << sdv::to_string(o.value) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"State-diagram verifier for first-order string programs"};
  app.require_subcommand(1);
  Common common;
  std::string program, spec, target = "true";
  std::vector<std::string> inputs;

  auto* check = app.add_subcommand("check", "Verify that a program (or spec applied to it) always outputs the target");
  check->add_option("program", program, "Program file")->required();
  check->add_option("--spec", spec, "Specification program applied to the output");
  check->add_option("--target", target, "Expected constant output");
  add_limits(check, common);
  add_search(check, common);

  auto* diagram = app.add_subcommand("diagram", "Build a state diagram; JSON on stdout unless --dot or --json is given");
  diagram->add_option("program", program, "Program file")->required();
  add_limits(diagram, common);

  auto* eval = app.add_subcommand("eval", "Run the interpreter");
  eval->add_option("program", program, "Program file")->required();
  eval->add_option("--input", inputs, "One value per parameter")->required();
  eval->add_option("--fuel", common.fuel, "Call unfoldings")->check(CLI::PositiveNumber);

  std::string outer;
  auto* compose = app.add_subcommand("compose", "Print spec(program(x)) as one program");
  compose->add_option("program", program, "Inner program")->required();
  compose->add_option("spec", outer, "Outer program")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }
  try {
    if (*check) return run_check(program, spec, target, common);
    if (*diagram) return run_diagram(program, common);
    if (*eval) return run_eval(program, inputs, common.fuel);
    if (*compose) {
      std::cout << sdv::to_source(sdv::compose(load(program), load(outer)));
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const sdv::TypeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
