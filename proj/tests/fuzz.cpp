#include "fuzz.hpp"

#include <random>
#include <set>

#include "sdv/evaluator.hpp"
#include "sdv/neighborhood.hpp"
#include "sdv/rewrite.hpp"
#include "sdv/solver.hpp"

namespace sdv::fuzz {

namespace {

using Rng = std::mt19937;

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(Rng& rng, int percent) { return pick(rng, 100) < percent; }

struct FormulaGen {
  Rng rng;
  explicit FormulaGen(std::uint32_t seed) : rng(seed) {}

  Term ch(int d) {
    switch (pick(rng, d > 0 ? 4 : 3)) {
      case 0: return var(coin(rng, 50) ? "a" : "b", Sort::Char);
      case 1: return chr(static_cast<char>('a' + pick(rng, 3)));
      case 2: return var("a", Sort::Char);
      default: return head(str(d - 1));
    }
  }

  Term str(int d) {
    switch (pick(rng, d > 0 ? 6 : 3)) {
      case 0: return var(coin(rng, 50) ? "u" : "v", Sort::Str);
      case 1: return eps();
      case 2: return var("u", Sort::Str);
      case 3: return conc(ch(d - 1), str(d - 1));
      case 4: return tail(str(d - 1));
      default: return ite(formula(d - 1), str(d - 1), str(d - 1));
    }
  }

  Term formula(int d) {
    switch (pick(rng, d > 0 ? 10 : 5)) {
      case 0: return eq(ch(d), ch(d));
      case 1: return leq(ch(d), ch(d));
      case 2: return eq(str(d), str(d));
      case 3: return var("e", Sort::Bool);
      case 4: return boolean(coin(rng, 50));
      case 5: return neg(formula(d - 1));
      case 6: return conj(formula(d - 1), formula(d - 1));
      case 7: return disj(formula(d - 1), formula(d - 1));
      case 8: return eq(formula(d - 1), boolean(coin(rng, 50)));
      default: return ite(formula(d - 1), formula(d - 1), formula(d - 1));
    }
  }
};

// Call-free atoms over three chars and two strings, biased towards order
// cycles and shape clashes so that a fair share is Unsat.
struct AtomGen {
  Rng rng;
  explicit AtomGen(std::uint32_t seed) : rng(seed) {}

  Term ch() {
    if (coin(rng, 15)) return chr(static_cast<char>('a' + pick(rng, 3)));
    static const char* names[] = {"a", "b", "c"};
    return var(names[pick(rng, 3)], Sort::Char);
  }

  Term str(int d) {
    switch (pick(rng, d > 0 ? 4 : 3)) {
      case 0: return var("u", Sort::Str);
      case 1: return var("v", Sort::Str);
      case 2: return eps();
      default: return conc(ch(), str(d - 1));
    }
  }

  Term atom() {
    switch (pick(rng, 7)) {
      case 0: return lt(ch(), ch());
      case 1: return leq(ch(), ch());
      case 2: return eq(ch(), ch());
      case 3: return neg(eq(ch(), ch()));
      case 4: return eq(str(2), str(2));
      case 5: return neg(eq(str(1), str(1)));
      default: return eq(head(str(1)), ch());
    }
  }
};

std::vector<TypedVar> vars_of(const std::vector<Term>& ts) {
  VarSet vs;
  for (const auto& t : ts) collect_vars(t, vs);
  return typed_vars(vs);
}

bool satisfied(const std::vector<Term>& atoms, const Evaluation& xi, const Program* p) {
  for (const auto& a : atoms) {
    const auto o = p ? eval_in_program(a, xi, *p, 400) : eval_closed(a, xi);
    if (!o.defined() || !o.value.truth) return false;
  }
  return true;
}

using Relation = std::set<std::pair<std::vector<Value>, Value>>;

constexpr std::size_t kLen = 2;
constexpr std::size_t kMaxEvaluations = 6000;

bool small(const Value& v) { return v.sort != Sort::Str || v.str.size() <= kLen; }

std::optional<Relation> relation(const State& s, const Program& p) {
  const auto vars = typed_vars(state_vars(s));
  if (count_evaluations(vars, "abc", kLen) > kMaxEvaluations) return std::nullopt;
  Relation r;
  for_each_evaluation(vars, "abc", kLen, [&](const Evaluation& xi) {
    if (!satisfied(s.atoms, xi, &p)) return true;
    const auto out = eval_closed(s.output, xi);
    if (!out.defined() || !small(out.value)) return true;
    std::vector<Value> ins;
    for (const auto& t : s.inputs) {
      const auto v = eval_closed(t, xi);
      if (!v.defined() || !small(v.value)) return true;
      ins.push_back(v.value);
    }
    r.emplace(std::move(ins), out.value);
    return true;
  });
  return r;
}

struct Checker {
  const Program& p;
  Report& rep;

  // Parent relation equals the union of its children's; nullopt when a
  // state is too large to enumerate.
  bool cover(const State& parent, const std::vector<Transition>& kids, const std::string& what) {
    auto rp = relation(parent);
    if (!rp) return false;
    Relation u;
    for (const auto& k : kids) {
      auto rk = relation(k.state);
      if (!rk) return false;
      u.insert(rk->begin(), rk->end());
    }
    ++rep.instances;
    if (u != *rp) rep.fail(what + " at " + to_display(parent));
    return true;
  }

  std::optional<Relation> relation(const State& s) { return fuzz::relation(s, p); }
};

std::vector<Term> str_vars(const State& s, Sort sort) {
  std::vector<Term> out;
  for (const auto& [name, so] : state_vars(s)) {
    if (so == sort) out.push_back(var(name, so));
  }
  return out;
}

}  // namespace

Report canonicalize_props(std::uint32_t seed, std::size_t n) {
  Report rep;
  FormulaGen gen(seed);
  const Bound bound{"abc", 3, 50};
  while (rep.instances < n) {
    const Term f = gen.formula(3);
    const Term c = canonicalize(f);
    ++rep.instances;
    if (!ground_equiv(f, c, nullptr, bound)) rep.fail("not equivalent: " + to_source(f) + " vs " + to_source(c));
    if (!term_equal(canonicalize(c), c)) rep.fail("not idempotent: " + to_source(f));
  }
  return rep;
}

Report solve_props(std::uint32_t seed, std::size_t n) {
  Report rep;
  AtomGen gen(seed);
  while (rep.instances < n) {
    std::vector<Term> atoms;
    const int k = 2 + pick(gen.rng, 4);
    for (int i = 0; i < k; ++i) atoms.push_back(gen.atom());
    ++rep.instances;
    if (solve(atoms) != SatVerdict::Unsat) continue;
    ++rep.unsat;
    bool model = false;
    for_each_evaluation(vars_of(atoms), "abc", 3, [&](const Evaluation& xi) {
      model = satisfied(atoms, xi, nullptr);
      return !model;
    });
    if (model) {
      std::string text;
      for (const auto& a : atoms) text += to_source(a) + "; ";
      rep.fail("false Unsat: " + text);
    }
  }
  return rep;
}

Report transition_props(std::uint32_t seed, std::size_t n, const std::vector<Program>& programs) {
  Report rep;
  Rng rng(seed);
  std::size_t rounds = 0;
  while (rep.instances < n && rounds++ < 50 * n) {
    const Program& p = programs[static_cast<std::size_t>(pick(rng, static_cast<int>(programs.size())))];
    const int depth = 1 + pick(rng, 3);
    const auto tree = build_neighborhood(initial_state(p), p, Limits{depth, 120}).tree;
    const int id = pick(rng, static_cast<int>(tree.nodes.size()));
    const auto& node = tree.nodes[static_cast<std::size_t>(id)];
    if (node.contradictory) continue;
    const State& s = node.state;
    const auto avoid = tree.path_vars(id);
    Checker chk{p, rep};
    try {
      const auto step = choose_step(s, p, avoid);
      if (step.kind != Step::Kind::None) {
        const auto kids = apply_step(s, step, p, avoid);
        if (chk.cover(s, kids, "driving step")) {
          rep.expansions += step.kind == Step::Kind::Expand ? 1 : 0;
          rep.guard_splits += step.kind == Step::Kind::Guard ? 1 : 0;
          rep.string_splits += step.kind == Step::Kind::Split ? 1 : 0;
        }
        for (const auto& k : kids) {
          const auto simp = simplify_state(k.state, avoid);
          if (chk.cover(k.state, {Transition{k.label, simp}}, "simplify")) ++rep.simplifications;
        }
      }
      const auto strs = str_vars(s, Sort::Str);
      if (!strs.empty()) {
        const auto target = strs[static_cast<std::size_t>(pick(rng, static_cast<int>(strs.size())))];
        const auto [a, b] = split_string(s, target, avoid);
        if (chk.cover(s, {a, b}, "string split on " + to_source(target))) ++rep.string_splits;
      }
      const auto chars = str_vars(s, Sort::Char);
      if (!chars.empty()) {
        const auto x = chars[static_cast<std::size_t>(pick(rng, static_cast<int>(chars.size())))];
        const Term y = coin(rng, 50) && chars.size() > 1
                           ? chars[static_cast<std::size_t>(pick(rng, static_cast<int>(chars.size())))]
                           : chr(static_cast<char>('a' + pick(rng, 3)));
        const Term g = coin(rng, 50) ? leq(x, y) : eq(x, y);
        const auto [a, b] = split_guard(s, g, avoid);
        if (chk.cover(s, {a, b}, "guard split on " + to_source(g))) ++rep.guard_splits;
      }
      // An indirect output and a duplicated atom must simplify away.
      State padded = s;
      const std::string z = fresh_var("z", state_var_names(s));
      const Sort out_sort = s.output->sort;
      padded.atoms.push_back(eq(var(z, out_sort), s.output));
      if (!s.atoms.empty()) padded.atoms.push_back(s.atoms[static_cast<std::size_t>(pick(rng, static_cast<int>(s.atoms.size())))]);
      padded.output = var(z, out_sort);
      if (chk.cover(padded, {Transition{Label::expansion("-"), simplify_state(padded, avoid)}}, "simplify padded")) {
        ++rep.simplifications;
      }
    } catch (const std::exception& e) {
      rep.fail(std::string("exception: ") + e.what() + " at " + to_display(s));
    }
  }
  return rep;
}

}  // namespace sdv::fuzz
