#include "doctest.h"
#include "sdv/rewrite.hpp"
#include "sdv/solver.hpp"
#include "test_util.hpp"

using namespace sdv;

namespace {

const VarSet kEnv{{"a", Sort::Char}, {"b", Sort::Char}, {"c", Sort::Char}, {"u", Sort::Str}, {"v", Sort::Str},
                  {"w", Sort::Str},  {"x", Sort::Str},  {"y", Sort::Str},  {"z", Sort::Str}, {"e", Sort::Bool},
                  {"i", Sort::Char}, {"j", Sort::Char}};

Term t(const std::string& s) { return test::term(s, kEnv); }

}  // namespace

TEST_SUITE("term-rewrite") {
  TEST_CASE("equal-term table") {
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"cons(a, u) == cons(b, v)", "a == b && u == v"},
        {"cons(a, u) == eps", "false"},
        {"if true then u else v", "u"},
        {"if false then u else v", "v"},
        {"e == true", "e"},
        {"e == false", "!e"},
        {"z == x && x == cons(b, y)", "z == cons(b, y) && x == cons(b, y)"},
    };
    for (const auto& [l, r] : pairs) {
      CAPTURE(l);
      CHECK(ground_equiv(t(l), t(r), nullptr));
      CHECK(term_equal(canonicalize(t(l)), canonicalize(t(r))));
    }
  }

  TEST_CASE("rule examples") {
    CHECK(to_source(canonicalize(t("cons(a, u) == cons(b, v)"))) == "a == b && u == v");
    CHECK(canonicalize(t("cons(i, cons(j, w)) == eps"))->is_false());
    CHECK(term_equal(canonicalize(t("if true then eps else x")), eps()));
    CHECK(term_equal(canonicalize(t("!!e")), t("e")));
    CHECK(term_equal(canonicalize(t("e && e")), t("e")));
    CHECK(term_equal(canonicalize(t("'a' <= 'b'")), boolean(true)));
  }

  TEST_CASE("conjuncts") {
    CHECK(conjuncts(boolean(true)).empty());
    const auto f = conjuncts(boolean(false));
    REQUIRE(f.size() == 1);
    CHECK(f[0]->is_false());
    auto p = test::load("sort.fp");
    VarSet env{{"a", Sort::Char}, {"c", Sort::Char}, {"b", Sort::Str}, {"d", Sort::Str}, {"q", Sort::Str}};
    auto g = test::term("c < a && q == insert(a, d) && cons(c, d) == sort(b)", env, &p);
    CHECK(conjuncts(g).size() == 3);
  }

  TEST_CASE("ground_equiv negatives") {
    CHECK_FALSE(ground_equiv(t("x"), t("y"), nullptr));
    CHECK_FALSE(ground_equiv(t("a <= b"), t("a < b"), nullptr));
    CHECK(ground_equiv(t("x"), t("x"), nullptr));
    CHECK(ground_equiv(t("cons(a, x) == eps"), boolean(false), nullptr));
  }

  TEST_CASE("canonicalize is idempotent on the table") {
    for (const char* s : {"cons(a, u) == cons(b, v) && u == eps", "if e then x else y", "!(a <= b) && e == false"}) {
      const auto once = canonicalize(t(s));
      CHECK(term_equal(canonicalize(once), once));
    }
  }
}

TEST_SUITE("solver") {
  TEST_CASE("unsat examples") {
    CHECK(solve({t("eps == cons(a, z)")}) == SatVerdict::Unsat);
    CHECK(solve({t("b < a"), t("c < j"), t("a == c"), t("j == b")}) == SatVerdict::Unsat);
    CHECK(solve({boolean(false)}) == SatVerdict::Unsat);
  }

  TEST_CASE("sat examples") {
    CHECK(solve({t("a <= c")}) == SatVerdict::SatLikely);
    CHECK(solve({}) == SatVerdict::SatLikely);
    CHECK(solve({t("x == cons(a, y)"), t("a < b")}) == SatVerdict::SatLikely);
  }

  TEST_CASE("verdict names") {
    CHECK(to_string(SatVerdict::Unsat) == "unsat");
    CHECK(to_string(SatVerdict::SatLikely) == "sat-likely");
  }
}
