#include <gtest/gtest.h>

#include "bvm/formula.hpp"
#include "bvm/random.hpp"

namespace bvm {
namespace {

Term v(const char* name) { return Term::var(name); }

TEST(Formula, ParsesBoundedQuantifier) {
  EXPECT_EQ(parse_formula("forall u in y . u = x"), fm::forall_in("u", v("y"), fm::eq(v("u"), v("x"))));
}

TEST(Formula, Precedence) {
  EXPECT_EQ(parse_formula("~(x in y) \\/ x = y"), fm::disj(fm::neg(fm::mem(v("x"), v("y"))), fm::eq(v("x"), v("y"))));
  EXPECT_EQ(parse_formula("x = x /\\ y = y \\/ x in y -> y in x"),
            fm::imp(fm::disj(fm::conj(fm::eq(v("x"), v("x")), fm::eq(v("y"), v("y"))), fm::mem(v("x"), v("y"))),
                    fm::mem(v("y"), v("x"))));
  EXPECT_EQ(parse_formula("a = a -> b = b -> c = c"),
            fm::imp(fm::eq(v("a"), v("a")), fm::imp(fm::eq(v("b"), v("b")), fm::eq(v("c"), v("c")))));
}

TEST(Formula, SyntaxErrorsCarryPositions) {
  try {
    parse_formula("forall u in y .");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), Errc::SyntaxError);
    EXPECT_EQ(e.pos().line, 1);
    EXPECT_GT(e.pos().column, 1);
  }
  EXPECT_THROW(parse_formula("x in"), ParseError);
  EXPECT_THROW(parse_formula("f(x) = x"), Error);
}

TEST(Formula, Restricted) {
  EXPECT_TRUE(is_restricted(fm::forall_in("u", v("y"), fm::mem(v("u"), v("x")))));
  EXPECT_FALSE(is_restricted(fm::forall("u", fm::eq(v("u"), v("u")))));
  EXPECT_TRUE(is_restricted(fm::mem(v("x"), v("y"))));
}

TEST(Formula, RestrictedIsClosedUnderConstruction) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Formula a = random_restricted_formula(rng, {{"x", "y"}, 3, 0.1});
    const Formula b = random_restricted_formula(rng, {{"x", "y"}, 3, 0.1});
    ASSERT_TRUE(is_restricted(a));
    EXPECT_TRUE(is_restricted(fm::neg(a)));
    EXPECT_TRUE(is_restricted(fm::conj(a, b)));
    EXPECT_TRUE(is_restricted(fm::imp(a, b)));
    EXPECT_TRUE(is_restricted(fm::exists_in("w", v("x"), a)));
    EXPECT_FALSE(is_restricted(fm::disj(a, fm::exists("w", b))));
  }
}

TEST(Formula, PrintParseRoundTrip) {
  Rng rng(8);
  Signature sig = Signature::set_theory();
  sig.predicate("r", 2).function("f", 1).function("c", 0);
  for (int i = 0; i < 300; ++i) {
    const Formula f = i % 2 ? random_restricted_formula(rng, {{"x", "y", "z"}, 4, 0.2})
                            : random_system_formula(rng, sig, {"x"}, {}, 4);
    const std::string text = to_string(f);
    EXPECT_EQ(parse_formula(text, sig), f) << text;
    EXPECT_EQ(to_string(parse_formula(text, sig)), text);
  }
  EXPECT_EQ(to_string(parse_formula("  forall   u in y.u=x ")), to_string(parse_formula("forall u in y . u = x")));
}

TEST(Formula, DepthAndFreeVariables) {
  const Formula f = parse_formula("forall u in y . (u = x /\\ ~(u in z))");
  EXPECT_EQ(depth(f), 3U);
  EXPECT_EQ(free_variables(f), (std::set<std::string>{"x", "y", "z"}));
  EXPECT_EQ(depth(parse_formula("x in y")), 0U);
}

TEST(Formula, PairIsBuiltIn) {
  const Formula f = parse_formula("pair(x, y) in z");
  EXPECT_EQ(f, fm::mem(Term::app("pair", {v("x"), v("y")}), v("z")));
  EXPECT_THROW(parse_formula("pair(x) in z"), Error);
}

}  // namespace
}  // namespace bvm
