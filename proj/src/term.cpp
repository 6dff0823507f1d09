#include "sdv/term.hpp"

#include <algorithm>
#include <sstream>

namespace sdv {

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Char: return "C";
    case Sort::Str: return "S";
    case Sort::Bool: return "B";
  }
  return "?";
}

namespace {

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Head: return "head";
    case Op::Tail: return "tail";
    case Op::Conc: return "cons";
    case Op::Eq: return "==";
    case Op::Leq: return "<=";
    case Op::Lt: return "<";
    case Op::Not: return "!";
    case Op::And: return "&&";
    case Op::Or: return "||";
    case Op::Ite: return "if";
  }
  return "?";
}

void expect_sort(const Term& t, Sort s, Op op) {
  if (t->sort != s) {
    throw TermError("operator " + std::string(op_name(op)) + " expects " +
                    std::string(sort_name(s)) + ", found " + std::string(sort_name(t->sort)) +
                    " in " + to_source(t));
  }
}

std::size_t arity(Op op) {
  switch (op) {
    case Op::Head:
    case Op::Tail:
    case Op::Not: return 1;
    case Op::Ite: return 3;
    default: return 2;
  }
}

}  // namespace

Term var(std::string name, Sort s) {
  auto n = std::make_shared<TermNode>(TermKind::Var, s);
  n->name = std::move(name);
  return n;
}

Term chr(char c) {
  auto n = std::make_shared<TermNode>(TermKind::CharLit, Sort::Char);
  n->ch = c;
  return n;
}

Term eps() {
  static const Term e = std::make_shared<TermNode>(TermKind::Eps, Sort::Str);
  return e;
}

Term boolean(bool b) {
  static const Term t = [] {
    auto n = std::make_shared<TermNode>(TermKind::BoolLit, Sort::Bool);
    n->truth = true;
    return Term(n);
  }();
  static const Term f = std::make_shared<TermNode>(TermKind::BoolLit, Sort::Bool);
  return b ? t : f;
}

Term prim(Op op, std::vector<Term> args) {
  if (args.size() != arity(op)) throw TermError("wrong arity for " + std::string(op_name(op)));
  Sort result = Sort::Bool;
  switch (op) {
    case Op::Head:
      expect_sort(args[0], Sort::Str, op);
      result = Sort::Char;
      break;
    case Op::Tail:
      expect_sort(args[0], Sort::Str, op);
      result = Sort::Str;
      break;
    case Op::Conc:
      expect_sort(args[0], Sort::Char, op);
      expect_sort(args[1], Sort::Str, op);
      result = Sort::Str;
      break;
    case Op::Eq:
      if (args[0]->sort != args[1]->sort) expect_sort(args[1], args[0]->sort, op);
      break;
    case Op::Leq:
    case Op::Lt:
      expect_sort(args[0], Sort::Char, op);
      expect_sort(args[1], Sort::Char, op);
      break;
    case Op::Not: expect_sort(args[0], Sort::Bool, op); break;
    case Op::And:
    case Op::Or:
      expect_sort(args[0], Sort::Bool, op);
      expect_sort(args[1], Sort::Bool, op);
      break;
    case Op::Ite:
      expect_sort(args[0], Sort::Bool, op);
      if (args[1]->sort != args[2]->sort) expect_sort(args[2], args[1]->sort, op);
      result = args[1]->sort;
      break;
  }
  auto n = std::make_shared<TermNode>(TermKind::Prim, result);
  n->op = op;
  n->args = std::move(args);
  return n;
}

Term call(std::string name, Sort result, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>(TermKind::Call, result);
  n->name = std::move(name);
  n->args = std::move(args);
  return n;
}

Term str_lit(std::string_view s) {
  Term t = eps();
  for (auto it = s.rbegin(); it != s.rend(); ++it) t = conc(chr(*it), t);
  return t;
}

Term conj_all(const std::vector<Term>& parts) {
  if (parts.empty()) return boolean(true);
  Term t = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) t = conj(parts[i], t);
  return t;
}

int term_compare(const Term& a, const Term& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (a->sort != b->sort) return a->sort < b->sort ? -1 : 1;
  switch (a->kind) {
    case TermKind::Var:
      return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
    case TermKind::CharLit: return a->ch == b->ch ? 0 : (a->ch < b->ch ? -1 : 1);
    case TermKind::Eps: return 0;
    case TermKind::BoolLit: return a->truth == b->truth ? 0 : (a->truth ? 1 : -1);
    case TermKind::Prim:
      if (a->op != b->op) return a->op < b->op ? -1 : 1;
      break;
    case TermKind::Call:
      if (a->name != b->name) return a->name < b->name ? -1 : 1;
      break;
  }
  if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (int c = term_compare(a->args[i], b->args[i]); c != 0) return c;
  }
  return 0;
}

bool term_equal(const Term& a, const Term& b) { return term_compare(a, b) == 0; }

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& a : t->args) n += term_size(a);
  return n;
}

bool is_simple(const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::CharLit:
    case TermKind::Eps:
    case TermKind::BoolLit: return true;
    case TermKind::Prim:
      return t->op == Op::Conc && is_simple(t->args[0]) && is_simple(t->args[1]);
    case TermKind::Call: return false;
  }
  return false;
}

bool is_ground(const Term& t) {
  if (t->is_var() || t->is_call()) return false;
  return std::all_of(t->args.begin(), t->args.end(), [](const Term& a) { return is_ground(a); });
}

bool has_call(const Term& t) {
  if (t->is_call()) return true;
  return std::any_of(t->args.begin(), t->args.end(), [](const Term& a) { return has_call(a); });
}

bool contains(const Term& haystack, const Term& needle) {
  if (term_equal(haystack, needle)) return true;
  return std::any_of(haystack->args.begin(), haystack->args.end(),
                     [&](const Term& a) { return contains(a, needle); });
}

void collect_vars(const Term& t, VarSet& out) {
  if (t->is_var()) {
    out.emplace(t->name, t->sort);
    return;
  }
  for (const auto& a : t->args) collect_vars(a, out);
}

VarSet free_data_vars(const Term& t) {
  VarSet out;
  collect_vars(t, out);
  return out;
}

namespace {
void collect_fvars(const Term& t, std::set<std::string>& out) {
  if (t->is_call()) out.insert(t->name);
  for (const auto& a : t->args) collect_fvars(a, out);
}
}  // namespace

std::set<std::string> functional_vars(const Term& t) {
  std::set<std::string> out;
  collect_fvars(t, out);
  return out;
}

void vars_in_order(const Term& t, std::vector<std::string>& out) {
  if (t->is_var()) {
    if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
    return;
  }
  for (const auto& a : t->args) vars_in_order(a, out);
}

namespace {
Term rebuild(const Term& t, std::vector<Term> args) {
  if (t->kind == TermKind::Prim) return prim(t->op, std::move(args));
  return call(t->name, t->sort, std::move(args));
}
}  // namespace

Term substitute(const Term& e, const std::vector<std::pair<Term, Term>>& pairs) {
  for (const auto& [from, to] : pairs) {
    if (from->sort != to->sort) throw TermError("substitution changes sort: " + to_source(from));
  }
  struct Walker {
    const std::vector<std::pair<Term, Term>>& pairs;
    Term go(const Term& t) const {
      for (const auto& [from, to] : pairs) {
        if (term_equal(t, from)) return to;
      }
      if (t->args.empty()) return t;
      std::vector<Term> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const auto& a : t->args) {
        args.push_back(go(a));
        changed = changed || args.back().get() != a.get();
      }
      return changed ? rebuild(t, std::move(args)) : t;
    }
  };
  if (pairs.empty()) return e;
  return Walker{pairs}.go(e);
}

void Clarification::bind(const std::string& name, Sort s, Term target) {
  if (find(name) != nullptr) throw TermError("variable bound twice in clarification: " + name);
  if (target->sort != s) throw TermError("clarification changes sort of " + name);
  if (!is_simple(target)) throw TermError("clarification target is not simple: " + to_source(target));
  bindings_.push_back({name, s, std::move(target)});
}

const Term* Clarification::find(const std::string& name) const {
  for (const auto& b : bindings_) {
    if (b.name == name) return &b.target;
  }
  return nullptr;
}

bool Clarification::is_renaming() const {
  std::set<std::string> seen;
  for (const auto& b : bindings_) {
    if (!b.target->is_var() || !seen.insert(b.target->name).second) return false;
  }
  return true;
}

std::vector<Clarification::Binding> Clarification::non_identity() const {
  std::vector<Binding> out;
  for (const auto& b : bindings_) {
    if (!(b.target->is_var() && b.target->name == b.name)) out.push_back(b);
  }
  return out;
}

Term apply_clarification(const Term& e, const Clarification& theta) {
  std::vector<std::pair<Term, Term>> pairs;
  pairs.reserve(theta.size());
  for (const auto& b : theta.bindings()) pairs.emplace_back(var(b.name, b.sort), b.target);
  return substitute(e, pairs);
}

std::string fresh_var(const std::string& hint, const std::set<std::string>& avoid) {
  if (!avoid.contains(hint)) return hint;
  for (int i = 1;; ++i) {
    std::string candidate = hint + std::to_string(i);
    if (!avoid.contains(candidate)) return candidate;
  }
}

std::string fresh_var(const std::string& hint, const VarSet& avoid) {
  std::set<std::string> names;
  for (const auto& [n, s] : avoid) names.insert(n);
  return fresh_var(hint, names);
}

std::vector<Term> conc_elements(const Term& t) {
  std::vector<Term> out;
  Term cur = t;
  while (cur->is_prim(Op::Conc)) {
    out.push_back(cur->args[0]);
    cur = cur->args[1];
  }
  out.push_back(cur);
  return out;
}

Term conc_chain(const std::vector<Term>& prefix, Term last) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) last = conc(*it, last);
  return last;
}

namespace {

int precedence(const Term& t) {
  if (t->kind != TermKind::Prim) return 10;
  switch (t->op) {
    case Op::Ite: return 0;
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Eq:
    case Op::Leq:
    case Op::Lt: return 3;
    case Op::Not: return 4;
    default: return 10;
  }
}

void print_source(const Term& t, std::ostream& os, int min_prec) {
  const bool paren = precedence(t) < min_prec;
  if (paren) os << '(';
  switch (t->kind) {
    case TermKind::Var: os << t->name; break;
    case TermKind::CharLit: os << '\'' << t->ch << '\''; break;
    case TermKind::Eps: os << "eps"; break;
    case TermKind::BoolLit: os << (t->truth ? "true" : "false"); break;
    case TermKind::Call:
      os << t->name << '(';
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        print_source(t->args[i], os, 0);
      }
      os << ')';
      break;
    case TermKind::Prim:
      switch (t->op) {
        case Op::Head:
        case Op::Tail:
        case Op::Conc:
          os << op_name(t->op) << '(';
          print_source(t->args[0], os, 0);
          if (t->op == Op::Conc) {
            os << ", ";
            print_source(t->args[1], os, 0);
          }
          os << ')';
          break;
        case Op::Not:
          os << '!';
          print_source(t->args[0], os, 5);
          break;
        case Op::Eq:
        case Op::Leq:
        case Op::Lt:
          print_source(t->args[0], os, 4);
          os << ' ' << op_name(t->op) << ' ';
          print_source(t->args[1], os, 4);
          break;
        case Op::And:
        case Op::Or: {
          const int p = precedence(t);
          print_source(t->args[0], os, p);
          os << ' ' << op_name(t->op) << ' ';
          print_source(t->args[1], os, p + 1);
          break;
        }
        case Op::Ite:
          os << "if ";
          print_source(t->args[0], os, 0);
          os << " then ";
          print_source(t->args[1], os, 0);
          os << " else ";
          print_source(t->args[2], os, 0);
          break;
      }
      break;
  }
  if (paren) os << ')';
}

void print_display(const Term& t, std::ostream& os, int min_prec) {
  if (t->is_prim(Op::Conc)) {
    auto elems = conc_elements(t);
    bool compact = true;
    for (const auto& e : elems) {
      compact = compact && ((e->is_var() && e->name.size() == 1) || e->kind == TermKind::CharLit ||
                            e->kind == TermKind::Eps);
    }
    if (compact) {
      for (const auto& e : elems) {
        if (e->is_var()) os << e->name;
        else if (e->kind == TermKind::CharLit) os << '\'' << e->ch << '\'';
        else os << "ε";
      }
      return;
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i) os << '.';
      print_display(elems[i], os, elems[i]->is_var() || elems[i]->is_const() ? 0 : 11);
    }
    return;
  }
  const bool paren = precedence(t) < min_prec;
  if (paren) os << '(';
  switch (t->kind) {
    case TermKind::Var: os << t->name; break;
    case TermKind::CharLit: os << '\'' << t->ch << '\''; break;
    case TermKind::Eps: os << "ε"; break;
    case TermKind::BoolLit: os << (t->truth ? "true" : "false"); break;
    case TermKind::Call:
      os << t->name << '(';
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        print_display(t->args[i], os, 0);
      }
      os << ')';
      break;
    case TermKind::Prim:
      switch (t->op) {
        case Op::Head:
        case Op::Tail:
          os << op_name(t->op) << '(';
          print_display(t->args[0], os, 0);
          os << ')';
          break;
        case Op::Not:
          os << '!';
          print_display(t->args[0], os, 5);
          break;
        case Op::Eq:
        case Op::Leq:
        case Op::Lt:
          print_display(t->args[0], os, 4);
          os << (t->op == Op::Eq ? " = " : (t->op == Op::Leq ? " <= " : " < "));
          print_display(t->args[1], os, 4);
          break;
        case Op::And:
        case Op::Or: {
          const int p = precedence(t);
          print_display(t->args[0], os, p);
          os << ' ' << op_name(t->op) << ' ';
          print_display(t->args[1], os, p + 1);
          break;
        }
        case Op::Ite:
          os << "[[";
          print_display(t->args[0], os, 0);
          os << "]] ";
          print_display(t->args[1], os, 5);
          os << " : ";
          print_display(t->args[2], os, 5);
          break;
        case Op::Conc: break;
      }
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_source(const Term& t) {
  std::ostringstream os;
  print_source(t, os, 0);
  return os.str();
}

std::string to_display(const Term& t) {
  std::ostringstream os;
  print_display(t, os, 0);
  return os.str();
}

}  // namespace sdv
