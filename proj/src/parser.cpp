#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "sdv/program.hpp"

namespace sdv {

std::vector<Sort> Equation::param_sorts() const {
  std::vector<Sort> out;
  for (const auto& p : params) out.push_back(p.sort);
  return out;
}

SyntaxError::SyntaxError(const std::string& msg, std::size_t l, std::size_t c)
    : std::runtime_error("syntax error at " + std::to_string(l) + ":" + std::to_string(c) + ": " +
                         msg),
      line(l),
      column(c) {}

TypeError::TypeError(const std::string& eq, const std::string& exp, const std::string& fnd)
    : std::runtime_error("type error in " + eq + ": expected " + exp + ", found " + fnd),
      equation(eq),
      expected(exp),
      found(fnd) {}

Program::Program(std::vector<Equation> equations) : equations_(std::move(equations)) {
  if (equations_.empty()) throw SyntaxError("program has no main equation", 1, 1);
  std::set<std::string> names;
  for (const auto& e : equations_) {
    if (!names.insert(e.name).second) throw DuplicateFunction("duplicate function " + e.name);
  }
  for (const auto& e : equations_) {
    std::set<std::string> params;
    for (const auto& p : e.params) {
      if (!params.insert(p.name).second) {
        throw TypeError(e.name, "distinct parameter names", "repeated " + p.name);
      }
    }
    if (e.body->sort != e.result) {
      throw TypeError(e.name, std::string(sort_name(e.result)),
                      std::string(sort_name(e.body->sort)));
    }
    for (const auto& [v, s] : free_data_vars(e.body)) {
      auto it = std::find_if(e.params.begin(), e.params.end(),
                             [&](const Param& p) { return p.name == v; });
      if (it == e.params.end()) throw UnboundVariable("unbound variable " + v + " in " + e.name);
      if (it->sort != s) throw TypeError(e.name, std::string(sort_name(it->sort)), v);
    }
    for (const auto& f : functional_vars(e.body)) {
      if (!names.contains(f)) throw UnboundVariable("undeclared function " + f + " in " + e.name);
    }
  }
}

const Equation* Program::find(std::string_view name) const {
  for (const auto& e : equations_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

namespace {

enum class Tok {
  Ident, CharLit, StrLit, LParen, RParen, Comma, Colon, Semi, Assign,
  EqEq, Leq, Lt, Bang, AndAnd, OrOr, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto adv = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto valid_char = [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv();
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') adv();
      continue;
    }
    const std::size_t l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      adv(j - i);
      continue;
    }
    if (c == '\'') {
      if (i + 2 >= src.size() || src[i + 2] != '\'') throw SyntaxError("bad char literal", l, cl);
      if (!valid_char(src[i + 1])) {
        throw SyntaxError("char outside alphabet (lowercase letters and digits)", l, cl);
      }
      out.push_back({Tok::CharLit, std::string(1, src[i + 1]), l, cl});
      adv(3);
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"') {
        if (!valid_char(src[j])) throw SyntaxError("char outside alphabet in string literal", l, cl);
        ++j;
      }
      if (j >= src.size()) throw SyntaxError("unterminated string literal", l, cl);
      out.push_back({Tok::StrLit, std::string(src.substr(i + 1, j - i - 1)), l, cl});
      adv(j - i + 1);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "==") { out.push_back({Tok::EqEq, "==", l, cl}); adv(2); continue; }
    if (two == "<=") { out.push_back({Tok::Leq, "<=", l, cl}); adv(2); continue; }
    if (two == "&&") { out.push_back({Tok::AndAnd, "&&", l, cl}); adv(2); continue; }
    if (two == "||") { out.push_back({Tok::OrOr, "||", l, cl}); adv(2); continue; }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case ':': k = Tok::Colon; break;
      case ';': k = Tok::Semi; break;
      case '=': k = Tok::Assign; break;
      case '<': k = Tok::Lt; break;
      case '!': k = Tok::Bang; break;
      default: throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({k, std::string(1, c), l, cl});
    adv();
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Signature {
  std::vector<Sort> params;
  Sort result;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::map<std::string, Signature> sigs)
      : toks_(std::move(toks)), sigs_(std::move(sigs)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_kw(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
  Token take() { return toks_[pos_++]; }
  Token expect(Tok k, std::string_view what) {
    if (!at(k)) fail("expected " + std::string(what) + ", found '" + peek().text + "'");
    return take();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().line, peek().col);
  }

  Sort parse_sort() {
    auto t = expect(Tok::Ident, "type");
    if (t.text == "C") return Sort::Char;
    if (t.text == "S") return Sort::Str;
    if (t.text == "B") return Sort::Bool;
    throw SyntaxError("unknown type " + t.text, t.line, t.col);
  }

  Equation parse_header() {
    if (!at_kw("fun")) fail("expected 'fun'");
    take();
    Equation eq;
    eq.name = expect(Tok::Ident, "function name").text;
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      for (;;) {
        Param p;
        p.name = expect(Tok::Ident, "parameter name").text;
        expect(Tok::Colon, "':'");
        p.sort = parse_sort();
        eq.params.push_back(p);
        if (at(Tok::Comma)) {
          take();
          continue;
        }
        break;
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Colon, "':'");
    eq.result = parse_sort();
    return eq;
  }

  std::vector<Equation> parse_program() {
    std::vector<Equation> eqs;
    while (!at(Tok::End)) {
      Equation eq = parse_header();
      expect(Tok::Assign, "'='");
      env_.clear();
      for (const auto& p : eq.params) env_[p.name] = p.sort;
      current_ = eq.name;
      eq.body = parse_expr();
      expect(Tok::Semi, "';'");
      eqs.push_back(std::move(eq));
    }
    if (eqs.empty()) fail("program has no main equation");
    return eqs;
  }

  Term parse_standalone(const VarSet& env) {
    env_ = env;
    current_ = "<term>";
    Term t = parse_expr();
    if (!at(Tok::End)) fail("trailing input");
    return t;
  }

  Term parse_expr() {
    if (at_kw("if")) {
      take();
      Term g = parse_expr();
      if (!at_kw("then")) fail("expected 'then'");
      take();
      Term a = parse_expr();
      if (!at_kw("else")) fail("expected 'else'");
      take();
      Term b = parse_expr();
      need(g, Sort::Bool);
      need(b, a->sort);
      return ite(g, a, b);
    }
    return parse_or();
  }

  Term parse_or() {
    Term l = parse_and();
    while (at(Tok::OrOr)) {
      take();
      Term r = parse_and();
      need(l, Sort::Bool);
      need(r, Sort::Bool);
      l = disj(l, r);
    }
    return l;
  }

  Term parse_and() {
    Term l = parse_cmp();
    while (at(Tok::AndAnd)) {
      take();
      Term r = parse_cmp();
      need(l, Sort::Bool);
      need(r, Sort::Bool);
      l = conj(l, r);
    }
    return l;
  }

  Term parse_cmp() {
    Term l = parse_unary();
    if (at(Tok::EqEq) || at(Tok::Leq) || at(Tok::Lt)) {
      Tok k = take().kind;
      Term r = parse_unary();
      if (k == Tok::EqEq) {
        need(r, l->sort);
        return eq(l, r);
      }
      need(l, Sort::Char);
      need(r, Sort::Char);
      return k == Tok::Leq ? leq(l, r) : lt(l, r);
    }
    return l;
  }

  Term parse_unary() {
    if (at(Tok::Bang)) {
      take();
      Term e = parse_unary();
      need(e, Sort::Bool);
      return neg(e);
    }
    return parse_primary();
  }

  std::vector<Term> parse_args() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    if (!at(Tok::RParen)) {
      for (;;) {
        args.push_back(parse_expr());
        if (at(Tok::Comma)) {
          take();
          continue;
        }
        break;
      }
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Term parse_primary() {
    if (at(Tok::LParen)) {
      take();
      Term e = parse_expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::CharLit)) return chr(take().text[0]);
    if (at(Tok::StrLit)) return str_lit(take().text);
    Token t = expect(Tok::Ident, "expression");
    if (t.text == "eps") return eps();
    if (t.text == "true") return boolean(true);
    if (t.text == "false") return boolean(false);
    if (t.text == "cons" || t.text == "head" || t.text == "tail") {
      auto args = parse_args();
      const std::size_t want = t.text == "cons" ? 2 : 1;
      if (args.size() != want) throw SyntaxError("wrong number of arguments to " + t.text, t.line, t.col);
      if (t.text == "cons") {
        need(args[0], Sort::Char);
        need(args[1], Sort::Str);
        return conc(args[0], args[1]);
      }
      need(args[0], Sort::Str);
      return t.text == "head" ? head(args[0]) : tail(args[0]);
    }
    if (at(Tok::LParen)) {
      auto it = sigs_.find(t.text);
      if (it == sigs_.end()) throw UnboundVariable("undeclared function " + t.text);
      auto args = parse_args();
      if (args.size() != it->second.params.size()) {
        throw TypeError(current_, std::to_string(it->second.params.size()) + " arguments to " + t.text,
                        std::to_string(args.size()));
      }
      for (std::size_t i = 0; i < args.size(); ++i) need(args[i], it->second.params[i]);
      return call(t.text, it->second.result, std::move(args));
    }
    auto it = env_.find(t.text);
    if (it == env_.end()) throw UnboundVariable("unbound variable " + t.text + " in " + current_);
    return var(t.text, it->second);
  }

 private:
  void need(const Term& t, Sort s) const {
    if (t->sort != s) {
      throw TypeError(current_, std::string(sort_name(s)),
                      std::string(sort_name(t->sort)) + " (" + to_source(t) + ")");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, Signature> sigs_;
  VarSet env_;
  std::string current_;
};

std::map<std::string, Signature> scan_signatures(const std::vector<Token>& toks) {
  std::map<std::string, Signature> sigs;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind == Tok::Ident && toks[i].text == "fun" &&
        (i == 0 || toks[i - 1].kind == Tok::Semi)) {
      std::vector<Token> slice(toks.begin() + static_cast<std::ptrdiff_t>(i), toks.end());
      Parser p(std::move(slice), {});
      Equation h = p.parse_header();
      if (sigs.contains(h.name)) throw DuplicateFunction("duplicate function " + h.name);
      sigs[h.name] = Signature{h.param_sorts(), h.result};
    }
  }
  return sigs;
}

}  // namespace

Program parse_program(std::string_view source) {
  auto toks = lex(source);
  auto sigs = scan_signatures(toks);
  Parser p(std::move(toks), std::move(sigs));
  return Program(p.parse_program());
}

Term parse_term(std::string_view text, const VarSet& env, const Program* program) {
  std::map<std::string, Signature> sigs;
  if (program != nullptr) {
    for (const auto& e : program->equations()) sigs[e.name] = Signature{e.param_sorts(), e.result};
  }
  Parser p(lex(text), std::move(sigs));
  return p.parse_standalone(env);
}

std::string to_source(const Program& p) {
  std::ostringstream os;
  for (const auto& e : p.equations()) {
    os << "fun " << e.name << '(';
    for (std::size_t i = 0; i < e.params.size(); ++i) {
      if (i) os << ", ";
      os << e.params[i].name << ": " << sort_name(e.params[i].sort);
    }
    os << "): " << sort_name(e.result) << " =\n  " << to_source(e.body) << ";\n";
  }
  return os.str();
}

}  // namespace sdv
