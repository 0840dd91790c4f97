#include <gtest/gtest.h>

#include "ck/derivations.hpp"
#include "support/closed_forms.hpp"
#include "support/oracle.hpp"

namespace ck {
namespace {

using testing::Random;
using testing::derivation_table;

const Poly d = del(), l = lam(), m = mu();
const Poly a_param = Poly::var("a");

GeneratorId L(int i) { return {"L", i}; }
GeneratorId H(int i) { return {"H", i}; }

const StructureTable& chv() {
  static const StructureTable t = builtin_algebra("CHV");
  return t;
}

bool is_derivation(const DerivationDescriptor& D, IndexRange window = {-2, 2}) {
  return verify_derivation(chv(), D, window).empty();
}

TEST(Apply, OuterScalar) {
  const OuterScalar D{2, a_param};
  EXPECT_EQ(apply(chv(), D, L(3)), LambdaElement::of(H(5), a_param));
  EXPECT_TRUE(apply(chv(), D, H(3)).is_zero());
}

TEST(Apply, InnerOnH) {
  const Poly g = d * d + Poly(3);
  const InnerDerivation D{Element::of(L(1), g)};
  EXPECT_EQ(apply(chv(), D, H(-2)), LambdaElement::of(H(-1), substitute(g, vars::del, -l) * (d + l)));
}

TEST(Apply, ExtendsThroughDerivative) {
  const OuterScalar D{0, Poly(1)};
  // D_l(d L[0]) = (d+l) H[0]
  EXPECT_EQ(apply(chv(), D, LambdaElement::of(L(0), d)), LambdaElement::of(H(0), d + l));
}

TEST(Apply, InnerNeedsHomogeneousElement) {
  const InnerDerivation D{gen("L", 0) + gen("H", 1)};
  EXPECT_THROW(apply(chv(), D, L(0)), DomainError);
}

TEST(Check, OuterScalarOnLL) {
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) EXPECT_TRUE(check_derivation(chv(), OuterScalar{1, a_param}, L(i), L(j)).is_zero());
  }
}

TEST(Check, ConstantF1IsNotADerivation) {
  const TableDerivation D{0, Poly(1), Poly(), Poly(), Poly()};
  EXPECT_FALSE(check_derivation(chv(), D, L(0), L(1)).is_zero());
  const auto failures = verify_derivation(chv(), D, {-1, 1});
  ASSERT_FALSE(failures.empty());
  EXPECT_NE(failures.front().describe().find("derivation identity fails"), std::string::npos);
}

TEST(Check, CountsIndexPairs) {
  std::size_t checked = 0;
  EXPECT_TRUE(verify_derivation(chv(), OuterScalar{0, Poly(1)}, {-2, 2}, &checked).empty());
  EXPECT_EQ(checked, 25u);
}

Element random_homogeneous(Random& rng, int c) {
  Element x;
  x.add(L(c), rng.poly({vars::del}, 3, 3));
  x.add(H(c), rng.poly({vars::del}, 3, 3));
  if (x.is_zero()) x = gen("L", c);
  return x;
}

TEST(Inner, RandomElementsAreDerivations) {
  Random rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int c = rng.integer(-2, 2);
    EXPECT_TRUE(is_derivation(InnerDerivation{random_homogeneous(rng, c)})) << trial;
  }
}

TEST(Outer, RandomScalarsAndVectorsAreDerivations) {
  Random rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    EXPECT_TRUE(is_derivation(OuterScalar{rng.integer(-3, 3), Poly(rng.scalar())}));
    OuterVector v;
    for (int k = 0; k < 3; ++k) v.a[rng.integer(-3, 3)] = Poly(rng.scalar());
    EXPECT_TRUE(is_derivation(v));
  }
  EXPECT_TRUE(is_derivation(OuterScalar{1, a_param}));
}

TEST(ToTable, MatchesHandWrittenForm) {
  Random rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int c = rng.integer(-2, 2);
    const Poly g = rng.poly({vars::del}), h = rng.poly({vars::del});
    Element x;
    x.add(L(c), g);
    x.add(H(c), h);
    EXPECT_EQ(to_table(chv(), InnerDerivation{x}, c), derivation_table(c, g, h, Poly()));
  }
}

TEST(Decompose, Examples) {
  const int c = 1;
  const TableDerivation t = derivation_table(c, d * d, Poly(), Poly(5));
  const DerivationSplit s = decompose_degree_c(chv(), t);
  EXPECT_EQ(s.g, d * d);
  EXPECT_TRUE(s.h.is_zero());
  EXPECT_EQ(s.a, Poly(5));

  const DerivationSplit outer_only = decompose_degree_c(chv(), to_table(chv(), OuterScalar{c, a_param}, c));
  EXPECT_TRUE(outer_only.g.is_zero());
  EXPECT_TRUE(outer_only.h.is_zero());
  EXPECT_EQ(outer_only.a, a_param);

  const DerivationSplit h_only = decompose_degree_c(chv(), to_table(chv(), InnerDerivation{Element::of(H(c), d + Poly(1))}, c));
  EXPECT_TRUE(h_only.g.is_zero());
  EXPECT_EQ(h_only.h, d + Poly(1));
  EXPECT_TRUE(h_only.a.is_zero());
}

TEST(Decompose, RoundTripsRandomTriples) {
  Random rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const int c = rng.integer(-2, 2);
    const Poly g = rng.poly({vars::del}), h = rng.poly({vars::del});
    const Poly a = trial % 5 == 0 ? a_param : Poly(rng.scalar());
    const TableDerivation input = derivation_table(c, g, h, a);
    const DerivationSplit s = decompose_degree_c(chv(), input);
    EXPECT_EQ(s.a, a) << trial;
    const TableDerivation rebuilt = to_table(chv(), s.inner(c), c) + to_table(chv(), OuterScalar{c, s.a}, c);
    EXPECT_EQ(rebuilt.to_string(), input.to_string()) << trial;
    EXPECT_EQ(s.g, g);
    EXPECT_EQ(s.h, h);
  }
}

TEST(Decompose, OuterVectorComponentHasNoInnerPart) {
  const OuterVector v{{{-1, Poly(2)}, {3, Poly(Scalar::fraction(1, 2))}}};
  for (const auto& [c, a] : v.a) {
    const DerivationSplit s = decompose_degree_c(chv(), to_table(chv(), OuterScalar{c, a}, c));
    EXPECT_TRUE(s.inner(c).x.is_zero());
    EXPECT_EQ(s.a, a);
  }
}

TEST(Decompose, NonDerivationReportsStep) {
  const TableDerivation bad{0, Poly(1), Poly(), Poly(), Poly()};
  try {
    decompose_degree_c(chv(), bad);
    FAIL() << "expected NotADerivation";
  } catch (const NotADerivation& e) {
    EXPECT_EQ(e.step(), 0);
  }
}

TEST(SplitByDegree, Examples) {
  const WindowedDerivation shift2 = restrict_to_window(chv(), OuterScalar{2, Poly(1)}, {-1, 1});
  const auto one = split_by_degree(shift2);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.begin()->first, 2);

  // ad of the inhomogeneous L[0] + L[1], given by its images
  WindowedDerivation ad;
  for (int i = -1; i <= 1; ++i) {
    for (const auto& x : {L(i), H(i)}) ad.images[x] = bracket(chv(), gen("L", 0) + gen("L", 1), Element::of(x));
  }
  const auto parts = split_by_degree(ad);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts.begin()->first, 0);
  EXPECT_EQ(parts.rbegin()->first, 1);
  EXPECT_EQ(parts.at(1).images.at(L(0)), bracket_gen(chv(), L(1), L(0)));

  EXPECT_TRUE(split_by_degree(WindowedDerivation{}).empty());
}

TEST(Windowed, OutsideWindowIsAnError) {
  const WindowedDerivation w = restrict_to_window(chv(), OuterScalar{0, Poly(1)}, {-1, 1});
  EXPECT_THROW(apply(chv(), w, L(2)), WindowError);
}

}  // namespace
}  // namespace ck
