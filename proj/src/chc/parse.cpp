#include "chcpre/chc.hpp"

#include <cctype>
#include <sstream>

namespace chcpre {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" +
                                        std::to_string(col) + ": " + msg
                                  : msg),
      line_(line),
      col_(col) {}

namespace {

enum class Tok { Ident, Var, Int, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const char* puncts[] = {":-", "=<", "<=", ">=", "=", "<", ">", "+",
                                 "-",  "*",  "(",  ")",  ",", ".", "/"};
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      Tok kind = (std::isupper(static_cast<unsigned char>(ch)) || ch == '_')
                     ? Tok::Var
                     : Tok::Ident;
      out.push_back({kind, word, l, c});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, src.substr(i, j - i), l, c});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* p : puncts) {
      std::string s(p);
      if (src.compare(i, s.size(), s) == 0) {
        out.push_back({Tok::Punct, s, l, c});
        advance(s.size());
        matched = true;
        break;
      }
    }
    if (!matched)
      throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at_punct(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == s;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  void expect(const std::string& s) {
    if (!at_punct(s)) {
      std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      fail("expected '" + s + "' but found " + got);
    }
    next();
  }

  // --- clause-local variable scope --------------------------------------

  void begin_clause(std::vector<std::string>* names) {
    names_ = names;
    index_.clear();
    for (std::size_t i = 0; i < names->size(); ++i)
      index_[(*names)[i]] = Var{static_cast<std::uint32_t>(i)};
  }

  Var named(const std::string& name) {
    if (name == "_") return fresh("_");
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    Var v{static_cast<std::uint32_t>(names_->size())};
    names_->push_back(name);
    index_[name] = v;
    return v;
  }

  Var fresh(const std::string& hint) {
    std::string base = hint == "_" ? "_V" : hint;
    std::string name = base;
    for (int k = 1; index_.contains(name); ++k) name = base + "_" + std::to_string(k);
    return named(name);
  }

  // --- expressions --------------------------------------------------------

  LinExpr expr() {
    LinExpr e = term();
    while (at_punct("+") || at_punct("-")) {
      bool minus = next().text == "-";
      LinExpr t = term();
      if (minus) e -= t;
      else e += t;
    }
    return e;
  }

  LinExpr term() {
    LinExpr e = unary();
    while (at_punct("*")) {
      const Token& op = peek();
      next();
      LinExpr f = unary();
      if (e.is_constant()) {
        e = f * e.constant();
      } else if (f.is_constant()) {
        e *= f.constant();
      } else {
        throw ParseError("nonlinear constraint", op.line, op.col);
      }
    }
    return e;
  }

  LinExpr unary() {
    if (at_punct("-")) {
      next();
      return unary() * Rational(-1);
    }
    if (at_punct("+")) {
      next();
      return unary();
    }
    return factor();
  }

  LinExpr factor() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      next();
      return LinExpr(Rational(Integer(t.text)));
    }
    if (t.kind == Tok::Var) {
      next();
      return LinExpr::var(named(t.text));
    }
    if (at_punct("(")) {
      next();
      LinExpr e = expr();
      expect(")");
      return e;
    }
    fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  bool at_relop() const {
    static const char* ops[] = {"=", "=<", "<=", ">=", "<", ">"};
    for (const char* op : ops)
      if (at_punct(op)) return true;
    return false;
  }

  LinConstraint constraint() {
    LinExpr lhs = expr();
    if (!at_relop()) fail("expected comparison operator");
    std::string op = next().text;
    LinExpr rhs = expr();
    if (op == "=") return LinConstraint::eq(lhs, rhs);
    if (op == "=<" || op == "<=") return LinConstraint::le(lhs, rhs);
    if (op == ">=") return LinConstraint::ge(lhs, rhs);
    if (op == "<") return LinConstraint::lt(lhs, rhs);
    return LinConstraint::gt(lhs, rhs);
  }

  /// Atom with distinct variable arguments; other arguments are bound by
  /// fresh variables and equalities appended to `extra`.
  Atom atom(std::vector<LinConstraint>& extra) {
    Token name = next();
    Atom a{name.text, {}};
    if (!at_punct("(")) return a;
    next();
    if (at_punct(")")) {
      next();
      return a;
    }
    for (;;) {
      bool plain = peek().kind == Tok::Var && (at_punct(",", 1) || at_punct(")", 1));
      if (plain) {
        Var v = named(next().text);
        if (std::find(a.args.begin(), a.args.end(), v) != a.args.end()) {
          Var f = fresh((*names_)[v.id]);
          extra.push_back(LinConstraint::eq(LinExpr::var(f), LinExpr::var(v)));
          v = f;
        }
        a.args.push_back(v);
      } else {
        LinExpr e = expr();
        Var f = fresh("_A");
        extra.push_back(LinConstraint::eq(LinExpr::var(f), e));
        a.args.push_back(f);
      }
      if (at_punct(",")) {
        next();
        continue;
      }
      expect(")");
      return a;
    }
  }

  std::size_t pos_ = 0;

 private:
  std::vector<Token> toks_;
  std::vector<std::string>* names_ = nullptr;
  std::map<std::string, Var> index_;
};

std::pair<std::string, std::size_t> parse_pred_signature(const std::string& sig) {
  auto slash = sig.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == sig.size())
    throw ParseError("malformed predicate '" + sig + "', expected name/arity", 0, 0);
  std::string name = sig.substr(0, slash);
  std::size_t arity = 0;
  for (char ch : sig.substr(slash + 1)) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ParseError("malformed predicate '" + sig + "', expected name/arity", 0, 0);
    arity = arity * 10 + static_cast<std::size_t>(ch - '0');
  }
  return {name, arity};
}

}  // namespace

Program parse_program(const std::string& text, const ParseOptions& opts) {
  Parser ps(tokenize(text));
  Program prog;
  std::vector<std::pair<std::string, std::size_t>> declared;
  std::vector<bool> explicit_id;
  std::map<std::string, std::pair<int, int>> first_use;

  auto note_arity = [&](const Atom& a, const Token& at) {
    auto [it, inserted] = prog.arity.emplace(a.pred, a.args.size());
    if (!inserted && it->second != a.args.size())
      throw ParseError("arity mismatch for predicate '" + a.pred + "'", at.line, at.col);
    first_use.emplace(a.pred, std::make_pair(at.line, at.col));
  };

  while (!ps.at_end()) {
    if (ps.at_punct(":-")) {
      ps.next();
      Token kw = ps.next();
      if (kw.kind != Tok::Ident || kw.text != "initial")
        throw ParseError("unknown directive", kw.line, kw.col);
      ps.expect("(");
      Token name = ps.next();
      if (name.kind != Tok::Ident) throw ParseError("expected predicate name", name.line, name.col);
      ps.expect("/");
      Token ar = ps.next();
      if (ar.kind != Tok::Int) throw ParseError("expected arity", ar.line, ar.col);
      ps.expect(")");
      ps.expect(".");
      declared.emplace_back(name.text, std::stoul(ar.text));
      continue;
    }

    Clause c;
    bool labelled = false;
    if (ps.peek().kind == Tok::Ident && ps.at_punct(".", 1) &&
        ps.peek(2).kind != Tok::End && ps.peek(2).line == ps.peek(1).line) {
      c.id = ps.next().text;
      ps.next();
      labelled = true;
    }
    ps.begin_clause(&c.var_names);
    std::vector<LinConstraint> cs;

    const Token head_tok = ps.peek();
    if (head_tok.kind != Tok::Ident) ps.fail("expected clause head");
    if (head_tok.text == kFalse) {
      ps.next();
    } else {
      c.head = ps.atom(cs);
      note_arity(*c.head, head_tok);
    }
    if (ps.at_punct(":-")) {
      ps.next();
      for (;;) {
        const Token t = ps.peek();
        if (t.kind == Tok::Ident) {
          if (t.text == "true") {
            ps.next();
          } else if (t.text == kFalse) {
            throw ParseError("false in body", t.line, t.col);
          } else {
            Atom a = ps.atom(cs);
            note_arity(a, t);
            c.body.push_back(std::move(a));
          }
        } else {
          cs.push_back(ps.constraint());
        }
        if (ps.at_punct(",")) {
          ps.next();
          continue;
        }
        break;
      }
    }
    ps.expect(".");
    c.constr = Conj(std::move(cs));
    prog.clauses.push_back(std::move(c));
    explicit_id.push_back(labelled);
  }

  // Clause identifiers.
  std::set<std::string> taken;
  for (std::size_t i = 0; i < prog.clauses.size(); ++i) {
    if (!explicit_id[i]) continue;
    if (!taken.insert(prog.clauses[i].id).second)
      throw ParseError("duplicate clause id '" + prog.clauses[i].id + "'", 0, 0);
  }
  for (std::size_t i = 0; i < prog.clauses.size(); ++i) {
    if (explicit_id[i]) continue;
    std::string id = unique_name("c" + std::to_string(i + 1), taken);
    taken.insert(id);
    prog.clauses[i].id = id;
  }

  // Initial predicate.
  if (opts.initial) declared = {parse_pred_signature(*opts.initial)};
  if (declared.empty()) throw ParseError("initial predicate undeclared", 0, 0);
  prog.initial = declared.front().first;
  for (const auto& [name, ar] : declared) {
    auto it = prog.arity.find(name);
    if (it == prog.arity.end())
      throw ParseError("initial predicate unused: " + name + "/" + std::to_string(ar), 0, 0);
    if (it->second != ar)
      throw ParseError("arity mismatch for initial predicate '" + name + "'", 0, 0);
    prog.initial_versions.insert(name);
  }
  for (const auto& c : prog.clauses) {
    if (c.head && c.head->pred == prog.initial) {
      for (Var v : c.head->args) {
        const std::string& n = c.var_names[v.id];
        prog.initial_arg_names.push_back(
            n.empty() || n[0] == '_' ? "X" + std::to_string(prog.initial_arg_names.size() + 1) : n);
      }
      break;
    }
  }
  if (prog.initial_clauses().empty())
    throw ParseError("initial predicate has no constrained fact", 0, 0);
  prog.validate();
  return prog;
}

Conj parse_constraints(const std::string& text, std::vector<std::string>& names) {
  Parser ps(tokenize(text));
  ps.begin_clause(&names);
  std::vector<LinConstraint> cs;
  if (ps.at_end()) return Conj();
  for (;;) {
    if (ps.peek().kind == Tok::Ident && ps.peek().text == "true") {
      ps.next();
    } else if (ps.peek().kind == Tok::Ident && ps.peek().text == kFalse) {
      ps.next();
      cs.push_back(LinConstraint::falsum());
    } else {
      cs.push_back(ps.constraint());
    }
    if (ps.at_punct(",")) {
      ps.next();
      continue;
    }
    break;
  }
  if (ps.at_punct(".")) ps.next();
  if (!ps.at_end()) ps.fail("unexpected '" + ps.peek().text + "'");
  return Conj(std::move(cs));
}

}  // namespace chcpre
