#include <gtest/gtest.h>

#include <sstream>

#include "ck/algebra_io.hpp"
#include "ck/cli.hpp"
#include "ck/parser.hpp"
#include "support/oracle.hpp"

namespace ck {
namespace {

using testing::Random;

const Poly d = del(), l = lam(), m = mu();

const StructureTable& chv() {
  static const StructureTable t = builtin_algebra("CHV");
  return t;
}

EvalContext algebra_context() {
  EvalContext ctx;
  ctx.algebra = &chv();
  return ctx;
}

TEST(Tokenize, KindsAndPositions) {
  const auto t = tokenize("[L[1] _l\n  2*d^-3]");
  ASSERT_EQ(t.size(), 15u);
  EXPECT_EQ(t[0].kind, TokenKind::lbrack);
  EXPECT_EQ(t[1].text, "L");
  EXPECT_EQ(t[5].kind, TokenKind::underscore);
  EXPECT_EQ(t[7].text, "2");
  EXPECT_EQ(t[7].pos.line, 2);
  EXPECT_EQ(t[7].pos.col, 3);
  EXPECT_EQ(t.back().kind, TokenKind::end);
}

TEST(Parse, Examples) {
  EXPECT_EQ(format(*parse_expr("(d+2*l)*L[3]")), "((d+(2*l))*L[3])");
  EXPECT_EQ(parse_expr("[L[1] _l L[2]]")->kind, Expr::Kind::bracket);
  EXPECT_EQ(format(*parse_expr("d^2*l+m")), "(((d^2)*l)+m)");
  EXPECT_EQ(format(*parse_expr("-d-l")), "((-d)-l)");
  EXPECT_EQ(parse_expr("L[0] _l v[1]")->kind, Expr::Kind::action);
}

TEST(Parse, ErrorsCarryLineAndColumn) {
  try {
    parse_expr("(d+");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 4);
    EXPECT_EQ(std::string(e.what()), "1:4: expected expression, found end of input");
  }
  try {
    parse_expr("d +\n  $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
  EXPECT_THROW(parse_expr("L[x]"), ParseError);
  EXPECT_THROW(parse_expr("[L[1] L[2]]"), ParseError);
  EXPECT_THROW(parse_expr("d)"), ParseError);
}

TEST(Eval, PolynomialsAndScalars) {
  EXPECT_EQ(parse_poly("(d+2*l)^2"), (d + l.scaled(2)) * (d + l.scaled(2)));
  EXPECT_EQ(parse_poly("-3/2").to_string(), "-3/2");
  EXPECT_EQ(parse_poly("i*i"), Poly(-1));
  EXPECT_EQ(parse_poly("q^-2*q^2"), Poly(1));
  EXPECT_THROW(parse_poly("d/l"), ParseError);
  EXPECT_THROW(parse_poly("L[1]"), ParseError);
}

TEST(Eval, BracketsAndActions) {
  const EvalContext ctx = algebra_context();
  EXPECT_EQ(format(eval("[L[1] _l L[2]]", ctx)), "(d+2*l)*L[3]");
  EXPECT_EQ(format(eval("[H[1] _l L[0]]", ctx)), "l*H[1]");
  EXPECT_EQ(format(eval("[H[1] _l H[0]]", ctx)), "0");
  EXPECT_EQ(format(eval("[L[0] _(l+m) H[0]]", ctx)), "(d+l+m)*H[0]");
  EXPECT_THROW(eval("[L[1] _l L[2]]"), ParseError);
  EXPECT_THROW(eval("L[1] + d", ctx), ParseError);
  EXPECT_THROW(eval("L[1] * H[1]", ctx), ParseError);

  const ModuleSpec M = build_M();
  EvalContext mctx;
  mctx.module = &M;
  EXPECT_EQ(format(eval("H[1] _l v[0]", mctx)), "hc*q*v[0]");
  EXPECT_THROW(eval("H[1] _l d", mctx), ParseError);
}

TEST(Format, Canonical) {
  EXPECT_EQ(format(Value(LambdaElement())), "0");
  const Element x = Element::of({"H", 3}, d) + gen("L", 3);
  EXPECT_EQ(format(Value(x)), "L[3]+d*H[3]");
  EXPECT_EQ(format(Value(Poly(Scalar::fraction(-3, 2)))), "-3/2");
}

// Random printable values of every kind.
Value random_value(Random& rng) {
  const std::vector<Var> coeff_vars{vars::del, vars::lambda, vars::mu, Var{"a"}, Var{"b"}, Var{"q", true}};
  switch (rng.integer(0, 2)) {
    case 0: return rng.poly(coeff_vars, 5, 3);
    case 1: {
      Element x;
      for (int t = rng.integer(0, 3); t > 0; --t) {
        x.add({rng.coin() ? "L" : "H", rng.integer(-4, 4)}, rng.poly(coeff_vars, 3, 2));
      }
      return x;
    }
    default: {
      ModuleVector v;
      for (int t = rng.integer(0, 3); t > 0; --t) v.add(BasisVector{rng.integer(-4, 4)}, rng.poly(coeff_vars, 3, 2));
      return v;
    }
  }
}

TEST(RoundTrip, FormatThenEvalIsIdentity) {
  Random rng(71);
  const EvalContext ctx = algebra_context();
  for (int trial = 0; trial < 500; ++trial) {
    const Value v = random_value(rng);
    const std::string text = format(v);
    const Value back = eval(text, ctx);
    EXPECT_TRUE(same_value(v, back)) << text << " -> " << format(back);
    if (v.index() == back.index()) {
      EXPECT_TRUE(v == back) << text;
    }
    EXPECT_EQ(format(back), text);
  }
}

TEST(RoundTrip, ExprFormatIsAFixedPoint) {
  const std::vector<std::string> inputs{"d+2*l*L[3]", "[L[1] _(l+m) d*H[-2]]", "-(d^3-1/2)*v[0]", "L[0] _l 3*v[-1]",
                                        "2^3-a*q^-1"};
  for (const auto& s : inputs) {
    const std::string once = format(*parse_expr(s));
    EXPECT_EQ(format(*parse_expr(once)), once);
  }
}

TEST(LoadModule, DefinitionFile) {
  const ModuleSpec mod = load_module(
      "module xk\n"
      "shape graded 0 1\n"
      "generators 0 1\n"
      "param x0\n"
      "action L 0 0 : d+a*l+b\n"
      "action H 0 0 : x0\n"
      "bits 0:0\n"
      "bits 1:1\n");
  EXPECT_EQ(mod.algebra, "CHV");
  EXPECT_EQ(*mod.coefficient("H", 0, 0), Poly::var("x0"));
  EXPECT_EQ(*mod.coefficient("L", 1, 0), Poly(1));
  EXPECT_THROW(load_module("shape rank1\n"), ParseError);
  EXPECT_THROW(load_module("module x\naction L 0 1 : d\n"), ParseError);
  EXPECT_THROW(load_module("module x\nshape graded 0 1\naction L 1 1 : d\n"), ParseError);
}

int run(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

TEST(Cli, ExitCodes) {
  std::string out, err;
  EXPECT_EQ(run({"bracket", "CHV", "[L[1] _l L[2]]"}, &out), 0);
  EXPECT_EQ(out, "(d+2*l)*L[3]\n");
  EXPECT_EQ(run({"bracket", "CHV", "(d+"}, &out, &err), 2);
  EXPECT_EQ(err, "parse error: 1:4: expected expression, found end of input\n");
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"deriv", "check", "table:0:1,0,0,0", "-1..1"}, &out), 1);
  EXPECT_EQ(run({"module", "check", "VAbc", "bits=0101100"}, &out), 1);
  EXPECT_EQ(run({"module", "check", "M", "a=0", "b=1", "q=1", "hc=0"}, &out), 0);
  EXPECT_EQ(out, "OK\n");
  EXPECT_EQ(run({"module", "check", "M", "q=d"}), 2);
}

TEST(Cli, HyphenatedVerbsAreAliases) {
  std::string a, b;
  EXPECT_EQ(run({"deriv-decompose", "outer:3:3"}, &a), 0);
  EXPECT_EQ(run({"deriv", "decompose", "outer:3:3"}, &b), 0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, "degree 3: g = 0, h = 0, a = 3\n");
}

TEST(Cli, OutputIsDeterministic) {
  std::string first, second;
  run({"module", "table", "M"}, &first);
  run({"module", "table", "M"}, &second);
  EXPECT_EQ(first, second);
  EXPECT_FALSE(first.empty());
}

}  // namespace
}  // namespace ck
