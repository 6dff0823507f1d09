#include "doctest.h"
#include "sdv/neighborhood.hpp"
#include "sdv/rewrite.hpp"
#include "test_util.hpp"

using namespace sdv;

namespace {

std::size_t count_terminal(const NeighborhoodTree& t) {
  std::size_t n = 0;
  for (int l : t.leaves()) n += is_terminal(t.nodes[static_cast<std::size_t>(l)].state) ? 1 : 0;
  return n;
}

bool has_leaf_like(const NeighborhoodTree& t, const State& s) {
  for (int l : t.leaves()) {
    if (state_equal(t.nodes[static_cast<std::size_t>(l)].state, s)) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("state-space") {
  TEST_CASE("initial state") {
    auto p = test::load("sort.fp");
    const auto s0 = initial_state(p);
    CHECK(to_display(s0) == "{y = sort(x)}^y_x");
    CHECK_FALSE(is_terminal(s0));
    CHECK(is_terminal(test::make_state(p, {}, {}, "eps", {"eps"})));
  }

  TEST_CASE("state equality") {
    auto p = test::load("sort.fp");
    VarSet env{{"x", Sort::Str}, {"y", Sort::Str}, {"u", Sort::Str}, {"v", Sort::Str}};
    auto a = test::make_state(p, env, {"y == sort(x)"}, "y", {"x"});
    auto b = test::make_state(p, env, {"v == sort(u)"}, "v", {"u"});
    CHECK(state_equal(a, b));
    auto e1 = test::make_state(p, env, {}, "eps", {"eps"});
    auto e2 = test::make_state(p, env, {"y == eps"}, "y", {"eps"});
    CHECK(state_equal(e1, e2));
    auto c = test::make_state(p, env, {"y == sort(x)"}, "y", {"cons('a', x)"});
    CHECK_FALSE(state_equal(a, c));
  }

  TEST_CASE("expand and split") {
    auto p = test::load("sort.fp");
    const auto s0 = initial_state(p);
    const auto calls = strict_calls(s0);
    REQUIRE(calls.size() == 1);
    const auto t = expand(s0, calls[0], p);
    CHECK(t.label.kind == Label::Kind::Expansion);
    CHECK(t.label.function == "sort");
    CHECK(strict_ite(t.state).has_value());
    auto [nil, cons] = split_string(t.state, s0.inputs[0]);
    CHECK(to_display(nil.label) == "x=ε");
    CHECK(nil.state.inputs.size() == 1);
    CHECK(term_equal(nil.state.inputs[0], eps()));
    CHECK(cons.label.pattern != nullptr);
  }

  TEST_CASE("sort neighborhood") {
    auto p = test::load("sort.fp");
    const auto r = build_neighborhood(initial_state(p), p, Limits{2, 500});
    const auto& t = r.tree;
    CHECK_FALSE(validate_tree(t).has_value());
    CHECK(t.leaves().size() == 4);
    CHECK(count_terminal(t) == 2);
    const auto env = test::sort_env();
    CHECK(has_leaf_like(t, test::make_state(p, env, {"a <= c", "cons(c, d) == sort(b)"}, "cons(a, cons(c, d))",
                                            {"cons(a, b)"})));
    CHECK(has_leaf_like(t, test::make_state(p, env, {"c < a", "q == insert(a, d)", "cons(c, d) == sort(b)"},
                                            "cons(c, q)", {"cons(a, b)"})));
    CHECK(has_leaf_like(t, test::make_state(p, env, {}, "cons(a, eps)", {"cons(a, eps)"})));
  }

  TEST_CASE("ord neighborhood") {
    auto p = test::load("ord.fp");
    const auto t = build_neighborhood(initial_state(p), p, Limits{1, 500}).tree;
    CHECK(t.leaves().size() == 4);
    CHECK(count_terminal(t) == 3);
    CHECK(t.edge_count() == 4);
  }

  TEST_CASE("terminal root gives a single node") {
    auto p = test::load("const_true.fp");
    const auto t = build_neighborhood(initial_state(p), p, Limits{}).tree;
    CHECK(t.nodes.size() <= 2);
    CHECK(count_terminal(t) == 1);
  }

  TEST_CASE("determinism") {
    auto p = test::load("sort.fp");
    const auto a = build_neighborhood(initial_state(p), p, Limits{4, 500}).tree;
    const auto b = build_neighborhood(initial_state(p), p, Limits{4, 500}).tree;
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK(to_display(a.nodes[i].state) == to_display(b.nodes[i].state));
  }

  TEST_CASE("reduce splices a chain") {
    auto p = test::load("sort.fp");
    VarSet env{{"x", Sort::Str}};
    NeighborhoodTree t;
    t.nodes.push_back(TreeNode{});
    t.nodes[0].state = test::make_state(p, env, {}, "x", {"x"});
    const int mid = t.add_child(0, {Label::guard(test::term("x == eps", env), true)},
                                test::make_state(p, env, {"x == eps"}, "x", {"x"}));
    t.add_child(mid, {Label::expansion("sort")}, test::make_state(p, env, {}, "eps", {"eps"}));
    const auto r = reduce(t);
    REQUIRE(r.nodes.size() == 2);
    CHECK(r.nodes[1].labels.size() == 2);
    const auto again = reduce(r);
    CHECK(again.nodes.size() == r.nodes.size());
  }

  TEST_CASE("reduce removes contradictory subtrees") {
    auto p = test::load("sort.fp");
    const auto raw = build_neighborhood(initial_state(p), p, Limits{3, 500}).tree;
    for (const auto& n : raw.nodes) {
      if (n.contradictory) CHECK(n.children.empty());
    }
    CHECK_FALSE(validate_tree(raw).has_value());
  }

  TEST_CASE("contradiction probe") {
    auto p = test::load("sort.fp");
    VarSet env{{"a", Sort::Char}, {"i", Sort::Char}, {"j", Sort::Str}};
    auto star = test::make_state(p, env, {"eps == sort(cons(i, j))"}, "cons(a, eps)", {"cons(a, cons(i, j))"});
    CHECK(probe_contradiction(star, p));
    CHECK_FALSE(probe_contradiction(initial_state(p), p));
  }
}
