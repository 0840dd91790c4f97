#pragma once

// Surface syntax (ASCII): d, l, m for the derivation and spectral variables,
// i for the imaginary unit, Fam[k] for generators, v[k] for module basis
// vectors, [x _s y] for the bracket at spectral value s, and x _s v for the
// module action.
//
//   expr    := sum ('_' spec sum)?
//   sum     := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' '-'? INT)?
//   primary := INT | IDENT | IDENT '[' '-'? INT ']' | '(' expr ')'
//            | '[' sum '_' spec sum ']'
//   spec    := IDENT | '(' sum ')'

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ck/algebra.hpp"
#include "ck/combination.hpp"
#include "ck/errors.hpp"
#include "ck/modules.hpp"
#include "ck/poly.hpp"

namespace ck {

struct SourcePos {
  int line = 1;
  int col = 1;
};

enum class TokenKind { integer, ident, lparen, rparen, lbrack, rbrack, plus, minus, star, slash, caret, underscore, comma, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  SourcePos pos;
};

inline std::vector<Token> tokenize(const std::string& text, SourcePos start = {}) {
  std::vector<Token> out;
  SourcePos pos = start;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.col = 1;
      } else {
        ++pos.col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.pos = pos;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = TokenKind::integer;
      t.text = text.substr(i, j - i);
      out.push_back(t);
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = TokenKind::ident;
      t.text = text.substr(i, j - i);
      out.push_back(t);
      advance(j - i);
      continue;
    }
    switch (c) {
      case '(': t.kind = TokenKind::lparen; break;
      case ')': t.kind = TokenKind::rparen; break;
      case '[': t.kind = TokenKind::lbrack; break;
      case ']': t.kind = TokenKind::rbrack; break;
      case '+': t.kind = TokenKind::plus; break;
      case '-': t.kind = TokenKind::minus; break;
      case '*': t.kind = TokenKind::star; break;
      case '/': t.kind = TokenKind::slash; break;
      case '^': t.kind = TokenKind::caret; break;
      case '_': t.kind = TokenKind::underscore; break;
      case ',': t.kind = TokenKind::comma; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", pos.line, pos.col);
    }
    t.text = std::string(1, c);
    out.push_back(t);
    advance(1);
  }
  Token e;
  e.kind = TokenKind::end;
  e.pos = pos;
  out.push_back(e);
  return out;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { integer, variable, generator, basis, neg, add, sub, mul, div, pow, bracket, action };

  Kind kind = Kind::integer;
  std::string text;  // integer digits, variable name or generator family
  int index = 0;     // generator / basis index, or exponent
  ExprPtr lhs, rhs, spectral;
  SourcePos pos;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    expect(TokenKind::end, "end of input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(TokenKind k) const { return peek().kind == k; }
  const Token& take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    const std::string found = t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'";
    throw ParseError("expected " + what + ", found " + found, t.pos.line, t.pos.col);
  }

  const Token& expect(TokenKind k, const std::string& what) {
    if (!at(k)) fail(what);
    return take();
  }

  static std::shared_ptr<Expr> node(Expr::Kind kind, SourcePos pos, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->pos = pos;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
  }

  ExprPtr expr() {
    ExprPtr left = sum();
    if (at(TokenKind::underscore)) {
      const SourcePos p = take().pos;
      ExprPtr s = spec();
      ExprPtr right = sum();
      auto e = node(Expr::Kind::action, p, left, right);
      e->spectral = std::move(s);
      return e;
    }
    return left;
  }

  ExprPtr spec() {
    if (at(TokenKind::ident)) {
      const Token& t = take();
      auto e = node(Expr::Kind::variable, t.pos);
      e->text = t.text;
      return e;
    }
    if (at(TokenKind::lparen)) {
      take();
      ExprPtr e = sum();
      expect(TokenKind::rparen, "')'");
      return e;
    }
    fail("spectral variable or parenthesized polynomial");
  }

  ExprPtr sum() {
    ExprPtr left = term();
    while (at(TokenKind::plus) || at(TokenKind::minus)) {
      const Token& op = take();
      ExprPtr right = term();
      left = node(op.kind == TokenKind::plus ? Expr::Kind::add : Expr::Kind::sub, op.pos, left, right);
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = unary();
    while (at(TokenKind::star) || at(TokenKind::slash)) {
      const Token& op = take();
      ExprPtr right = unary();
      left = node(op.kind == TokenKind::star ? Expr::Kind::mul : Expr::Kind::div, op.pos, left, right);
    }
    return left;
  }

  ExprPtr unary() {
    if (at(TokenKind::minus)) {
      const SourcePos p = take().pos;
      return node(Expr::Kind::neg, p, unary());
    }
    return power();
  }

  int signed_integer(const std::string& what) {
    bool negative = false;
    if (at(TokenKind::minus)) {
      take();
      negative = true;
    }
    const Token& t = expect(TokenKind::integer, what);
    long long v = 0;
    for (char c : t.text) {
      v = v * 10 + (c - '0');
      if (v > 1000000000LL) throw ParseError("integer " + t.text + " is too large here", t.pos.line, t.pos.col);
    }
    return static_cast<int>(negative ? -v : v);
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (at(TokenKind::caret)) {
      const SourcePos p = take().pos;
      auto e = node(Expr::Kind::pow, p, base);
      e->index = signed_integer("integer exponent");
      return e;
    }
    return base;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::integer: {
        take();
        auto e = node(Expr::Kind::integer, t.pos);
        e->text = t.text;
        return e;
      }
      case TokenKind::ident: {
        const Token id = take();
        if (at(TokenKind::lbrack)) {
          take();
          auto e = node(id.text == "v" ? Expr::Kind::basis : Expr::Kind::generator, id.pos);
          e->text = id.text;
          e->index = signed_integer("integer index");
          expect(TokenKind::rbrack, "']'");
          return e;
        }
        auto e = node(Expr::Kind::variable, id.pos);
        e->text = id.text;
        return e;
      }
      case TokenKind::lparen: {
        take();
        ExprPtr e = expr();
        expect(TokenKind::rparen, "')'");
        return e;
      }
      case TokenKind::lbrack: {
        const SourcePos p = take().pos;
        ExprPtr left = sum();
        expect(TokenKind::underscore, "'_' before the spectral parameter");
        ExprPtr s = spec();
        ExprPtr right = sum();
        expect(TokenKind::rbrack, "']'");
        auto e = node(Expr::Kind::bracket, p, left, right);
        e->spectral = std::move(s);
        return e;
      }
      default: fail("expression");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& text, SourcePos start = {}) {
  return detail::ExprParser(tokenize(text, start)).parse();
}

/// Fully parenthesized rendering of an AST.
inline std::string format(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::integer:
    case Expr::Kind::variable: return e.text;
    case Expr::Kind::generator:
    case Expr::Kind::basis: return e.text + "[" + std::to_string(e.index) + "]";
    case Expr::Kind::neg: return "(-" + format(*e.lhs) + ")";
    case Expr::Kind::add: return "(" + format(*e.lhs) + "+" + format(*e.rhs) + ")";
    case Expr::Kind::sub: return "(" + format(*e.lhs) + "-" + format(*e.rhs) + ")";
    case Expr::Kind::mul: return "(" + format(*e.lhs) + "*" + format(*e.rhs) + ")";
    case Expr::Kind::div: return "(" + format(*e.lhs) + "/" + format(*e.rhs) + ")";
    case Expr::Kind::pow: return "(" + format(*e.lhs) + "^" + std::to_string(e.index) + ")";
    case Expr::Kind::bracket:
      return "[" + format(*e.lhs) + " _(" + format(*e.spectral) + ") " + format(*e.rhs) + "]";
    case Expr::Kind::action: return "(" + format(*e.lhs) + " _(" + format(*e.spectral) + ") " + format(*e.rhs) + ")";
  }
  return "";
}

using Value = std::variant<Poly, Element, ModuleVector>;

inline std::string format(const Value& v) {
  return std::visit([](const auto& x) { return x.to_string(); }, v);
}

/// Values compare equal when they print identically; zero of any kind
/// equals zero of any other kind.
inline bool same_value(const Value& a, const Value& b) {
  auto zero = [](const Value& v) { return std::visit([](const auto& x) { return x.is_zero(); }, v); };
  if (zero(a) || zero(b)) return zero(a) && zero(b);
  return a.index() == b.index() && format(a) == format(b);
}

struct EvalContext {
  const StructureTable* algebra = nullptr;
  const ModuleSpec* module = nullptr;
  /// Declared parameters; the flag marks invertible ones.
  std::map<std::string, bool> parameters{{"q", true}};
  bool allow_undeclared = true;
};

namespace detail {

class Evaluator {
 public:
  explicit Evaluator(const EvalContext& ctx) : ctx_(ctx) {}

  Value eval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::integer: return Poly(Scalar(Rational(e.text.c_str())));
      case Expr::Kind::variable: return variable(e);
      case Expr::Kind::generator: {
        GeneratorId g{e.text, e.index};
        if (ctx_.algebra) {
          try {
            ctx_.algebra->require_generator(g);
          } catch (const DomainError& err) {
            throw ParseError(err.what(), e.pos.line, e.pos.col);
          }
        } else if (e.text != "L" && e.text != "H") {
          throw ParseError("unknown generator family '" + e.text + "'", e.pos.line, e.pos.col);
        }
        return Element::of(g);
      }
      case Expr::Kind::basis: return ModuleVector::of(BasisVector{e.index});
      case Expr::Kind::neg:
        return std::visit([](const auto& x) -> Value { return -x; }, eval(*e.lhs));
      case Expr::Kind::add:
      case Expr::Kind::sub: return additive(e);
      case Expr::Kind::mul: return multiply(e);
      case Expr::Kind::div: return divide(e);
      case Expr::Kind::pow: {
        const Poly base = as_poly(eval(*e.lhs), *e.lhs, "the base of '^'");
        try {
          return base.pow(e.index);
        } catch (const Error& err) {
          throw ParseError(err.what(), e.pos.line, e.pos.col);
        }
      }
      case Expr::Kind::bracket: {
        if (!ctx_.algebra) throw ParseError("no algebra loaded for the bracket", e.pos.line, e.pos.col);
        const Element x = as_element(eval(*e.lhs), *e.lhs);
        const Element y = as_element(eval(*e.rhs), *e.rhs);
        const Poly s = as_poly(eval(*e.spectral), *e.spectral, "the spectral parameter");
        return bracket(*ctx_.algebra, x, y, s);
      }
      case Expr::Kind::action: {
        if (!ctx_.module) throw ParseError("no module loaded for the action", e.pos.line, e.pos.col);
        const Element x = as_element(eval(*e.lhs), *e.lhs);
        const Value rv = eval(*e.rhs);
        const Poly s = as_poly(eval(*e.spectral), *e.spectral, "the spectral parameter");
        ModuleVector v;
        if (const auto* mv = std::get_if<ModuleVector>(&rv)) {
          v = *mv;
        } else if (!is_zero(rv)) {
          throw ParseError("the right side of an action must be a module vector", e.rhs->pos.line, e.rhs->pos.col);
        }
        try {
          return act(*ctx_.module, x, v, s);
        } catch (const Error& err) {
          throw ParseError(err.what(), e.pos.line, e.pos.col);
        }
      }
    }
    throw ParseError("unknown expression", e.pos.line, e.pos.col);
  }

 private:
  static bool is_zero(const Value& v) {
    return std::visit([](const auto& x) { return x.is_zero(); }, v);
  }

  static const char* kind_name(const Value& v) {
    switch (v.index()) {
      case 0: return "polynomial";
      case 1: return "algebra element";
      default: return "module vector";
    }
  }

  static Poly as_poly(const Value& v, const Expr& at, const std::string& role) {
    if (const auto* p = std::get_if<Poly>(&v)) return *p;
    if (is_zero(v)) return Poly();
    throw ParseError(role + " must be a polynomial, not an " + std::string(kind_name(v)), at.pos.line, at.pos.col);
  }

  static Element as_element(const Value& v, const Expr& at) {
    if (const auto* x = std::get_if<Element>(&v)) return *x;
    if (is_zero(v)) return Element();
    throw ParseError(std::string("expected an algebra element, found a ") + kind_name(v), at.pos.line, at.pos.col);
  }

  Value variable(const Expr& e) const {
    const std::string& n = e.text;
    if (n == "d") return del();
    if (n == "l") return lam();
    if (n == "m") return mu();
    if (n == "i") return Poly(Scalar::imaginary_unit());
    if (n == "v") throw ParseError("basis vectors are written v[k]", e.pos.line, e.pos.col);
    auto it = ctx_.parameters.find(n);
    if (it != ctx_.parameters.end()) return Poly::var(Var{n, it->second});
    if (!ctx_.allow_undeclared) throw ParseError("undeclared parameter '" + n + "'", e.pos.line, e.pos.col);
    return Poly::var(Var{n, false});
  }

  Value additive(const Expr& e) const {
    const Value a = eval(*e.lhs), b = eval(*e.rhs);
    const bool plus = e.kind == Expr::Kind::add;
    if (is_zero(b)) return a;
    if (is_zero(a)) return plus ? b : std::visit([](const auto& x) -> Value { return -x; }, b);
    if (a.index() != b.index()) {
      throw ParseError(std::string("cannot combine a ") + kind_name(a) + " with a " + kind_name(b), e.pos.line,
                       e.pos.col);
    }
    try {
      return std::visit(
          [&](const auto& x) -> Value {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b);
            return plus ? T(x + y) : T(x - y);
          },
          a);
    } catch (const ContextError& err) {
      throw ParseError(err.what(), e.pos.line, e.pos.col);
    }
  }

  Value multiply(const Expr& e) const {
    const Value a = eval(*e.lhs), b = eval(*e.rhs);
    try {
      if (const auto* p = std::get_if<Poly>(&a)) {
        return std::visit([&](const auto& y) -> Value { return *p * y; }, b);
      }
      if (const auto* q = std::get_if<Poly>(&b)) {
        return std::visit([&](const auto& x) -> Value { return x * *q; }, a);
      }
    } catch (const ContextError& err) {
      throw ParseError(err.what(), e.pos.line, e.pos.col);
    }
    throw ParseError(std::string("cannot multiply a ") + kind_name(a) + " by a " + kind_name(b), e.pos.line,
                     e.pos.col);
  }

  Value divide(const Expr& e) const {
    const Value a = eval(*e.lhs);
    const Poly b = as_poly(eval(*e.rhs), *e.rhs, "a divisor");
    if (!b.is_unit()) throw ParseError("can only divide by a nonzero constant or unit, not " + b.to_string(), e.pos.line, e.pos.col);
    const Poly inv = b.inverse_unit();
    return std::visit([&](const auto& x) -> Value { return x * inv; }, a);
  }

  const EvalContext& ctx_;
};

}  // namespace detail

inline Value eval(const Expr& e, const EvalContext& ctx = {}) { return detail::Evaluator(ctx).eval(e); }

inline Value eval(const std::string& text, const EvalContext& ctx = {}) { return eval(*parse_expr(text), ctx); }

/// Parses text that must denote a polynomial.
inline Poly parse_poly(const std::string& text, const EvalContext& ctx = {}, SourcePos start = {}) {
  const ExprPtr e = parse_expr(text, start);
  const Value v = eval(*e, ctx);
  if (const auto* p = std::get_if<Poly>(&v)) return *p;
  if (std::visit([](const auto& x) { return x.is_zero(); }, v)) return Poly();
  throw ParseError("expected a polynomial", e->pos.line, e->pos.col);
}

inline Element parse_element(const std::string& text, const EvalContext& ctx = {}, SourcePos start = {}) {
  const ExprPtr e = parse_expr(text, start);
  const Value v = eval(*e, ctx);
  if (const auto* x = std::get_if<Element>(&v)) return *x;
  if (std::visit([](const auto& x) { return x.is_zero(); }, v)) return Element();
  throw ParseError("expected an algebra element", e->pos.line, e->pos.col);
}

}  // namespace ck
