#include <algorithm>

#include "doctest.h"
#include "sdv/composition.hpp"
#include "sdv/evaluator.hpp"
#include "sdv/export.hpp"
#include "sdv/verify.hpp"
#include "test_util.hpp"

using namespace sdv;

namespace {

StateDiagram diagram_of(const Program& p) {
  auto r = build_state_diagram(p);
  REQUIRE_MESSAGE(r.diagram.has_value(), r.diagnostics);
  return *r.diagram;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

NeighborhoodTree sort_ord_product(const Program& sort, const Program& ord, const Program& composed) {
  const auto u = build_neighborhood(initial_state(sort), sort, Limits{2, 500}).tree;
  const auto up = rename_apart(build_neighborhood(initial_state(ord), ord, Limits{1, 500}).tree, tree_vars(u));
  return build_product_neighborhood(u, up, composed);
}

}  // namespace

TEST_SUITE("composition") {
  TEST_CASE("compose sort and ord") {
    const auto sort = test::load("sort.fp");
    const auto ord = test::load("ord.fp");
    const auto c = compose(sort, ord);
    CHECK(c.main().result == Sort::Bool);
    CHECK(c.equations().size() == 4);
    CHECK(c.find("sort") != nullptr);
    CHECK(c.find("ord") != nullptr);
    for (const auto& s : enumerate_strings("abc", 4)) {
      const auto two = eval_program(ord, {eval_program(sort, {Value::of_str(s)}).value});
      CHECK(eval_program(c, {Value::of_str(s)}) == two);
    }
    CHECK(parse_program(to_source(c)).equations().size() == 4);
  }

  TEST_CASE("compose rejects mismatched sorts") {
    const auto ord = test::load("ord.fp");
    CHECK_THROWS_AS(compose(ord, ord), TypeError);
  }

  TEST_CASE("compose renames clashing functions") {
    const auto id = test::load("identity.fp");
    const auto c = compose(id, id);
    CHECK(c.equations().size() == 3);
    CHECK(eval_program(c, {Value::of_str("abc")}).value == Value::of_str("abc"));
  }

  TEST_CASE("product neighborhood of sort and ord") {
    const auto sort = test::load("sort.fp");
    const auto ord = test::load("ord.fp");
    const auto t = sort_ord_product(sort, ord, compose(sort, ord));
    CHECK_FALSE(validate_tree(t).has_value());
    CHECK(t.nodes.size() == 11);
    const auto leaves = t.leaves();
    CHECK(leaves.size() == 5);
    std::size_t true_terminal = 0;
    for (int l : leaves) {
      const auto& s = t.nodes[static_cast<std::size_t>(l)].state;
      if (is_terminal(s) && s.output->is_true()) ++true_terminal;
    }
    CHECK(true_terminal == 2);
    CHECK(t.root().origin == std::make_pair(0, 0));
  }

  TEST_CASE("product with a contradictory side") {
    const auto sort = test::load("sort.fp");
    const auto ord = test::load("ord.fp");
    const auto c = compose(sort, ord);
    const auto u = build_neighborhood(initial_state(sort), sort, Limits{2, 500}).tree;
    NeighborhoodTree up;
    up.nodes.push_back(TreeNode{});
    up.nodes[0].state = rename_apart(initial_state(ord), tree_vars(u));
    const auto t = build_product_neighborhood(u, up, c);
    CHECK_FALSE(validate_tree(t).has_value());
  }
}

TEST_SUITE("diagram") {
  TEST_CASE("sort diagram") {
    const auto p = test::load("sort.fp");
    const auto d = diagram_of(p);
    REQUIRE(d.pairs.size() == 2);
    for (const auto& pr : d.pairs) CHECK(pr.ancestor == 0);
    CHECK(d.open_leaves.size() == 2);
    CHECK_FALSE(validate_diagram(d, p).has_value());
  }

  TEST_CASE("ord diagram") {
    const auto p = test::load("ord.fp");
    const auto d = diagram_of(p);
    REQUIRE(d.pairs.size() == 1);
    CHECK(d.pairs[0].ancestor == 0);
    CHECK(d.pairs[0].proof->kind == EmbeddingProof::Kind::Explicit);
    CHECK(d.tree.nodes.size() == 5);
    CHECK(d.tree.edge_count() == 4);
  }

  TEST_CASE("every corpus program gets a valid diagram") {
    for (const char* f : {"identity.fp", "const_true.fp", "reverse.fp", "all_a.fp", "member.fp", "maxchar.fp",
                          "dup.fp", "buggy_sort.fp"}) {
      CAPTURE(f);
      const auto p = test::load(f);
      const auto r = build_state_diagram(p);
      REQUIRE(r.diagram.has_value());
      CHECK_FALSE(validate_diagram(*r.diagram, p).has_value());
    }
  }

  TEST_CASE("validator rejects a broken diagram") {
    const auto p = test::load("sort.fp");
    auto d = diagram_of(p);
    auto dropped = d;
    dropped.pairs.pop_back();
    CHECK(validate_diagram(dropped, p).has_value());
    auto moved = d;
    moved.pairs[0].ancestor = moved.pairs[0].leaf;
    CHECK(validate_diagram(moved, p).has_value());
    CHECK_THROWS_AS(check_theorem3(dropped, p, boolean(true)), InvalidDiagram);
  }

  TEST_CASE("depth limit reports a partial tree") {
    const auto p = test::load("sort.fp");
    DiagramOptions o;
    o.limits.max_nodes = 3;
    const auto r = build_state_diagram(p, o);
    CHECK_FALSE(r.diagram.has_value());
    CHECK_FALSE(r.diagnostics.empty());
    CHECK_FALSE(r.partial.nodes.empty());
  }

  TEST_CASE("counterexample search") {
    const auto c = compose(test::load("sort.fp"), test::load("ord.fp"));
    CHECK_FALSE(find_counterexample(c, Value::of_bool(true), "abc", 6, kDefaultFuel).has_value());
    CHECK_FALSE(find_counterexample(test::load("const_true.fp"), Value::of_bool(true), "abc", 6, kDefaultFuel));
    const auto bad = compose(test::load("buggy_sort.fp"), test::load("ord.fp"));
    const auto one = find_counterexample(bad, Value::of_bool(true), "abc", 6, kDefaultFuel, 1);
    const auto four = find_counterexample(bad, Value::of_bool(true), "abc", 6, kDefaultFuel, 4);
    REQUIRE(one.has_value());
    REQUIRE(four.has_value());
    CHECK(one->inputs == four->inputs);
    CHECK(one->output == Value::of_bool(false));
  }
}

TEST_SUITE("export") {
  TEST_CASE("ord dot") {
    const auto d = diagram_of(test::load("ord.fp"));
    const auto dot = export_dot(d);
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(count(dot, "style=dashed") == 1);
    CHECK(count(dot, "label=\"⊆\"") == 1);
    CHECK(count(dot, " -> ") == 5);
    CHECK(count(dot, "peripheries=2") == 1);
    CHECK(dot == export_dot(diagram_of(test::load("ord.fp"))));
  }

  TEST_CASE("sort dot has two fold edges into the root") {
    const auto dot = export_dot(diagram_of(test::load("sort.fp")));
    CHECK(count(dot, "-> n0 [style=dashed") == 2);
  }

  TEST_CASE("single-node diagram") {
    StateDiagram d;
    d.tree.nodes.push_back(TreeNode{});
    d.tree.nodes[0].state = test::make_state(test::load("identity.fp"), {}, {}, "eps", {"eps"});
    const auto dot = export_dot(d);
    CHECK(count(dot, " -> ") == 0);
    const auto json = export_json(d);
    CHECK(json.find("\"embeddings\": []") != std::string::npos);
  }

  TEST_CASE("json round trip") {
    for (const char* f : {"ord.fp", "sort.fp", "reverse.fp"}) {
      CAPTURE(f);
      const auto p = test::load(f);
      const auto d = diagram_of(p);
      const auto text = export_json(d);
      CHECK(text == export_json(diagram_of(p)));
      const auto back = import_json(text, p);
      CHECK_FALSE(validate_diagram(back, p).has_value());
      CHECK(export_json(back) == text);
    }
  }

  TEST_CASE("json of the ord diagram") {
    const auto text = export_json(diagram_of(test::load("ord.fp")));
    CHECK(count(text, "\"id\":") == 5);
    CHECK(count(text, "\"leaf\":") == 1);
  }

  TEST_CASE("flagship json round trip") {
    const auto sort = test::load("sort.fp");
    const auto ord = test::load("ord.fp");
    const auto v = verify(sort, &ord);
    REQUIRE(v.diagram.has_value());
    const auto back = import_json(export_json(*v.diagram), v.program);
    CHECK_FALSE(validate_diagram(back, v.program).has_value());
  }

  TEST_CASE("malformed json") {
    const auto p = test::load("ord.fp");
    CHECK_THROWS_AS(import_json("{", p), std::runtime_error);
    CHECK_THROWS_AS(import_json("{\"format\": \"other\"}", p), std::runtime_error);
  }
}

TEST_SUITE("verify") {
  TEST_CASE("sort satisfies ord") {
    const auto sort = test::load("sort.fp");
    const auto ord = test::load("ord.fp");
    const auto v = verify(sort, &ord);
    CHECK(v.kind == VerdictKind::Verified);
    CHECK(v.from_product);
    CHECK(v.warnings.empty());
    REQUIRE(v.diagram.has_value());
    CHECK(check_theorem3(*v.diagram, v.program, boolean(true)));
    for (const auto& pr : v.diagram->pairs) CHECK(output_preserving(*pr.proof));
  }

  TEST_CASE("buggy sort is refuted") {
    const auto buggy = test::load("buggy_sort.fp");
    const auto ord = test::load("ord.fp");
    const auto v = verify(buggy, &ord);
    CHECK(v.kind == VerdictKind::Refuted);
    REQUIRE(v.counterexample.has_value());
    const auto out = eval_program(v.program, v.counterexample->inputs);
    CHECK(out.value == Value::of_bool(false));
  }

  TEST_CASE("constant program") {
    const auto v = verify(test::load("const_true.fp"), nullptr);
    CHECK(v.kind == VerdictKind::Verified);
  }

  TEST_CASE("bounded oracle blind spot") {
    const auto v = verify(test::load("short7.fp"), nullptr);
    CHECK(v.kind == VerdictKind::Unknown);
    VerifyOptions o;
    o.max_len = 7;
    CHECK(verify(test::load("short7.fp"), nullptr, o).kind == VerdictKind::Refuted);
  }

  TEST_CASE("targets") {
    CHECK(parse_target("true", Sort::Bool) == Value::of_bool(true));
    CHECK(parse_target("'a'", Sort::Char) == Value::of_char('a'));
    CHECK(parse_target("eps", Sort::Str) == Value::of_str(""));
    CHECK(parse_target("\"ab\"", Sort::Str) == Value::of_str("ab"));
    CHECK_THROWS_AS(parse_target("'a'", Sort::Bool), TypeError);
    CHECK_THROWS_AS(parse_target("maybe", Sort::Bool), TypeError);
    VerifyOptions o;
    o.target = Value::of_char('a');
    CHECK_THROWS_AS(verify(test::load("const_true.fp"), nullptr, o), TypeError);
  }

  TEST_CASE("exit codes") {
    CHECK(exit_code(VerdictKind::Verified) == 0);
    CHECK(exit_code(VerdictKind::Unknown) == 1);
    CHECK(exit_code(VerdictKind::Refuted) == 2);
    CHECK(to_string(VerdictKind::Refuted) == "REFUTED");
  }
}
