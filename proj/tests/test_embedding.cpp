#include "doctest.h"
#include "sdv/embedding.hpp"
#include "test_util.hpp"

using namespace sdv;

namespace {

struct SortStates {
  Program p = test::load("sort.fp");
  State s0 = initial_state(p);
  State s4 = test::make_state(p, test::sort_env(), {"a <= c", "cons(c, d) == sort(b)"}, "cons(a, cons(c, d))",
                              {"cons(a, b)"});
  State s5 = test::make_state(p, test::sort_env(), {"c < a", "q == insert(a, d)", "cons(c, d) == sort(b)"},
                              "cons(c, q)", {"cons(a, b)"});
};

struct OrdStates {
  Program p = test::load("ord.fp");
  VarSet env{{"a", Sort::Char}, {"c", Sort::Char}, {"d", Sort::Str}, {"y", Sort::Bool}};
  State sigma0 = initial_state(p);
  State sigma1 = test::make_state(p, env, {"a <= c", "y == ord(cons(c, d))"}, "y", {"cons(a, cons(c, d))"});
};

bool bound_to(const Clarification& th, const std::string& v, const Term& t) {
  const Term* got = th.find(v);
  return got && term_equal(*got, t);
}

}  // namespace

TEST_SUITE("embedding") {
  TEST_CASE("s4 embeds explicitly into s0") {
    SortStates st;
    const auto e = find_explicit(st.s4, st.s0);
    REQUIRE(e.has_value());
    const VarSet env = test::sort_env();
    CHECK(bound_to(e->theta, "y", test::term("cons(c, d)", env)));
    CHECK(bound_to(e->theta, "x", test::term("b", env)));
    CHECK(e->theta.non_identity().size() == 2);
    const auto pr = explicit_proof(st.s4, st.s0, *e);
    CHECK_FALSE(check_proof(*pr, st.p).has_value());
    // The embedding forgets the output: y_s0[θ] = cd while s4 outputs acd.
    CHECK_FALSE(output_preserving(*pr));
    CHECK_FALSE(find_explicit(st.s4, st.s0, true).has_value());
  }

  TEST_CASE("sigma1 embeds explicitly into sigma0") {
    OrdStates st;
    const auto e = find_explicit(st.sigma1, st.sigma0);
    REQUIRE(e.has_value());
    const auto moved = e->theta.non_identity();
    REQUIRE(moved.size() == 1);
    CHECK(moved[0].name == "x");
    CHECK(term_equal(moved[0].target, test::term("cons(c, d)", st.env)));
    CHECK(output_preserving(*explicit_proof(st.sigma1, st.sigma0, *e)));
    CHECK(find_explicit(st.sigma1, st.sigma0, true).has_value());
  }

  TEST_CASE("no explicit embedding in the other direction") {
    SortStates st;
    CHECK_FALSE(find_explicit(st.s0, st.s4).has_value());
    CHECK_FALSE(find_explicit(st.s5, st.s0).has_value());
  }

  TEST_CASE("s5 is justified into s0") {
    SortStates st;
    const auto pr = check_justified(st.s5, st.s0, st.p);
    REQUIRE(pr);
    CHECK(pr->kind == EmbeddingProof::Kind::Justified);
    CHECK_FALSE(check_proof(*pr, st.p).has_value());
    std::size_t terminal = 0;
    for (int l : pr->u.leaves()) terminal += is_terminal(pr->u.nodes[static_cast<std::size_t>(l)].state) ? 1 : 0;
    CHECK(terminal == 1);
    REQUIRE(pr->obligations.size() == 2);
    std::size_t explicit_n = 0, goal_n = 0;
    for (const auto& o : pr->obligations) {
      explicit_n += o.proof->kind == EmbeddingProof::Kind::Explicit ? 1 : 0;
      goal_n += o.proof->kind == EmbeddingProof::Kind::Conditional && o.proof->discharged_by_goal ? 1 : 0;
    }
    CHECK(explicit_n == 1);
    CHECK(goal_n == 1);
    CHECK(kind_name(pr->kind) == "justified");
  }

  TEST_CASE("s0 is not justified into s5") {
    SortStates st;
    CHECK_FALSE(check_justified(st.s0, st.s5, st.p));
  }

  TEST_CASE("tampered proofs are rejected") {
    SortStates st;
    auto e = *find_explicit(st.s4, st.s0);
    e.residual.clear();
    e.residual.push_back(test::term("a < c", test::sort_env()));
    CHECK(check_proof(*explicit_proof(st.s4, st.s0, e), st.p).has_value());
  }

  TEST_CASE("match_atoms orientation") {
    const VarSet env{{"x", Sort::Str}, {"y", Sort::Str}, {"u", Sort::Str}};
    Clarification th;
    const auto rest = match_atoms({test::term("x == y", env)}, {test::term("u == eps", env), test::term("x == u", env)},
                                  th, false);
    REQUIRE(rest.has_value());
    CHECK(rest->size() == 1);
  }
}
