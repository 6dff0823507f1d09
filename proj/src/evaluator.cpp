#include "sdv/evaluator.hpp"

#include <limits>

namespace sdv {

std::string to_string(const Value& v) {
  switch (v.sort) {
    case Sort::Char: return std::string("'") + v.ch + "'";
    case Sort::Str: return v.str.empty() ? "eps" : v.str;
    case Sort::Bool: return v.truth ? "true" : "false";
  }
  return "?";
}

Term to_term(const Value& v) {
  switch (v.sort) {
    case Sort::Char: return chr(v.ch);
    case Sort::Str: return str_lit(v.str);
    case Sort::Bool: return boolean(v.truth);
  }
  return boolean(false);
}

std::string to_string(const EvalOutcome& o) {
  switch (o.kind) {
    case EvalOutcome::Kind::Defined: return to_string(o.value);
    case EvalOutcome::Kind::Undefined: return "undefined";
    case EvalOutcome::Kind::FuelExhausted: return "fuel exhausted";
  }
  return "?";
}

namespace {

class Interpreter {
 public:
  Interpreter(const Program* program, std::size_t fuel) : program_(program), fuel_(fuel) {}

  EvalOutcome eval(const Term& e, const Evaluation& xi) {
    switch (e->kind) {
      case TermKind::Var: {
        auto it = xi.find(e->name);
        if (it == xi.end()) return EvalOutcome::undefined();
        return EvalOutcome::of(it->second);
      }
      case TermKind::CharLit: return EvalOutcome::of(Value::of_char(e->ch));
      case TermKind::Eps: return EvalOutcome::of(Value::of_str(""));
      case TermKind::BoolLit: return EvalOutcome::of(Value::of_bool(e->truth));
      case TermKind::Call: return eval_call(e, xi);
      case TermKind::Prim: break;
    }
    if (e->op == Op::Ite) {
      auto g = eval(e->args[0], xi);
      if (!g.defined()) return g;
      return eval(e->args[g.value.truth ? 1 : 2], xi);
    }
    std::vector<Value> vals;
    vals.reserve(e->args.size());
    for (const auto& a : e->args) {
      auto r = eval(a, xi);
      if (!r.defined()) return r;
      vals.push_back(std::move(r.value));
    }
    switch (e->op) {
      case Op::Head:
        if (vals[0].str.empty()) return EvalOutcome::undefined();
        return EvalOutcome::of(Value::of_char(vals[0].str.front()));
      case Op::Tail:
        if (vals[0].str.empty()) return EvalOutcome::undefined();
        return EvalOutcome::of(Value::of_str(vals[0].str.substr(1)));
      case Op::Conc: return EvalOutcome::of(Value::of_str(std::string(1, vals[0].ch) + vals[1].str));
      case Op::Eq: return EvalOutcome::of(Value::of_bool(vals[0] == vals[1]));
      case Op::Leq: return EvalOutcome::of(Value::of_bool(vals[0].ch <= vals[1].ch));
      case Op::Lt: return EvalOutcome::of(Value::of_bool(vals[0].ch < vals[1].ch));
      case Op::Not: return EvalOutcome::of(Value::of_bool(!vals[0].truth));
      case Op::And: return EvalOutcome::of(Value::of_bool(vals[0].truth && vals[1].truth));
      case Op::Or: return EvalOutcome::of(Value::of_bool(vals[0].truth || vals[1].truth));
      case Op::Ite: break;
    }
    return EvalOutcome::undefined();
  }

 private:
  EvalOutcome eval_call(const Term& e, const Evaluation& xi) {
    const Equation* eq = program_ ? program_->find(e->name) : nullptr;
    if (eq == nullptr) return EvalOutcome::undefined();
    Evaluation frame;
    for (std::size_t i = 0; i < e->args.size(); ++i) {
      auto r = eval(e->args[i], xi);
      if (!r.defined()) return r;
      frame[eq->params[i].name] = std::move(r.value);
    }
    if (fuel_ == 0) return EvalOutcome::exhausted();
    --fuel_;
    return eval(eq->body, frame);
  }

  const Program* program_;
  std::size_t fuel_;
};

}  // namespace

EvalOutcome eval_closed(const Term& e, const Evaluation& xi) {
  return Interpreter(nullptr, 0).eval(e, xi);
}

EvalOutcome eval_in_program(const Term& e, const Evaluation& xi, const Program& program,
                            std::size_t fuel) {
  return Interpreter(&program, fuel).eval(e, xi);
}

EvalOutcome eval_program(const Program& program, const std::vector<Value>& args, std::size_t fuel) {
  const auto& m = program.main();
  if (args.size() != m.params.size()) {
    throw ArityMismatch(m.name + " expects " + std::to_string(m.params.size()) + " arguments, got " +
                        std::to_string(args.size()));
  }
  Evaluation xi;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].sort != m.params[i].sort) throw ArityMismatch("argument sort mismatch for " + m.name);
    xi[m.params[i].name] = args[i];
  }
  return eval_in_program(m.body, xi, program, fuel);
}

std::vector<std::string> enumerate_strings(const std::string& alphabet, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

void for_each_evaluation(const std::vector<TypedVar>& vars, const std::string& alphabet,
                         std::size_t max_len, const std::function<bool(const Evaluation&)>& visit) {
  const auto strings = enumerate_strings(alphabet, max_len);
  std::vector<std::vector<Value>> domains;
  for (const auto& v : vars) {
    std::vector<Value> dom;
    switch (v.sort) {
      case Sort::Char:
        for (char c : alphabet) dom.push_back(Value::of_char(c));
        break;
      case Sort::Str:
        for (const auto& s : strings) dom.push_back(Value::of_str(s));
        break;
      case Sort::Bool:
        dom = {Value::of_bool(false), Value::of_bool(true)};
        break;
    }
    if (dom.empty()) return;
    domains.push_back(std::move(dom));
  }
  std::vector<std::size_t> idx(vars.size(), 0);
  Evaluation xi;
  for (std::size_t i = 0; i < vars.size(); ++i) xi[vars[i].name] = domains[i][0];
  for (;;) {
    if (!visit(xi)) return;
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++idx[k] < domains[k].size()) {
        xi[vars[k].name] = domains[k][idx[k]];
        break;
      }
      idx[k] = 0;
      xi[vars[k].name] = domains[k][0];
      if (k == 0) return;
    }
    if (vars.empty()) return;
  }
}

std::vector<Evaluation> enumerate_evaluations(const std::vector<TypedVar>& vars,
                                              const std::string& alphabet, std::size_t max_len) {
  std::vector<Evaluation> out;
  for_each_evaluation(vars, alphabet, max_len, [&](const Evaluation& xi) {
    out.push_back(xi);
    return true;
  });
  return out;
}

std::size_t count_evaluations(const std::vector<TypedVar>& vars, const std::string& alphabet,
                              std::size_t max_len) {
  const std::size_t strings = enumerate_strings(alphabet, max_len).size();
  std::size_t n = 1;
  constexpr std::size_t cap = std::numeric_limits<std::size_t>::max() / 1024;
  for (const auto& v : vars) {
    const std::size_t d = v.sort == Sort::Char ? alphabet.size() : v.sort == Sort::Str ? strings : 2;
    n = n > cap / (d == 0 ? 1 : d) ? cap : n * d;
  }
  return n;
}

std::vector<TypedVar> typed_vars(const VarSet& vars) {
  std::vector<TypedVar> out;
  for (const auto& [n, s] : vars) out.push_back({n, s});
  return out;
}

}  // namespace sdv
