#include <gtest/gtest.h>

#include "bvm/arrows.hpp"
#include "bvm/evaluator.hpp"
#include "bvm/random.hpp"

namespace bvm {
namespace {

class B4 : public ::testing::Test {
 protected:
  Universe u{BoolAlg(2)};
  const BoolAlg& alg = u.algebra();
  Elem p = alg.atom(0);
  Elem q = alg.atom(1);
  SetId e = u.empty_set();
  SetId y = u.make(std::vector<std::pair<SetId, Elem>>{{u.empty_set(), alg.atom(0)}});
};

TEST_F(B4, WorkedExamples) {
  EXPECT_TRUE(eval_bv(u, parse_formula("forall u in y . u = x"), {{"x", e}, {"y", y}}).is_one());
  EXPECT_EQ(eval_bv(u, parse_formula("x in y"), {{"x", e}, {"y", y}}), p);
  for (SetId x : enumerate_universe(u, 3)) EXPECT_TRUE(eval_bv(u, parse_formula("x = x"), {{"x", x}}).is_one());
}

TEST_F(B4, UnboundAndUnbounded) {
  EXPECT_THROW(eval_bv(u, parse_formula("x in y"), {{"x", e}}), Error);
  const Formula f = parse_formula("exists v . v in y");
  try {
    eval_bv(u, f, {{"y", y}});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::UnboundedQuantifier);
  }
  const Fragment frag = enumerate_universe(u, 2);
  EXPECT_EQ(eval_bv(u, f, {{"y", y}}, &frag), p);
}

TEST(Evaluator, Classical) {
  const HFSet e = HFSet::empty();
  const HFSet one = HFSet::ordinal(1);
  EXPECT_TRUE(eval_classical(parse_formula("x in y"), {{"x", e}, {"y", one}}));
  EXPECT_TRUE(eval_classical(parse_formula("forall u in x . u in y"), {{"x", e}, {"y", e}}));
  EXPECT_FALSE(eval_classical(parse_formula("x = y"), {{"x", one}, {"y", e}}));
}

TEST_F(B4, Los) {
  const LosReport r = check_los(u, parse_formula("x in y"), {{"x", e}, {"y", y}});
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.satisfied, p.bits);
  EXPECT_EQ(r.per_atom, (std::vector<bool>{true, false}));
  const LosReport contradiction = check_los(u, parse_formula("x in y /\\ ~(x in y)"), {{"x", e}, {"y", y}});
  EXPECT_TRUE(contradiction.holds);
  EXPECT_TRUE(contradiction.truth.is_zero());
  EXPECT_EQ(contradiction.satisfied, 0U);
}

TEST(Evaluator, StandardNamesAreAllOrNone) {
  Universe u(BoolAlg(3));
  Rng rng(2);
  const auto level = cumulative_level(3);
  for (int i = 0; i < 100; ++i) {
    const Formula f = random_restricted_formula(rng, {{"x", "y"}, 3, 0.2});
    const Assignment a{{"x", u.name(level[static_cast<std::size_t>(i) % level.size()])},
                       {"y", u.name(level[static_cast<std::size_t>(i * 7 + 1) % level.size()])}};
    const LosReport r = check_los(u, f, a);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.satisfied == 0 || r.satisfied == u.algebra().full_mask()) << to_string(f);
  }
}

TEST(Evaluator, Transfer) {
  Universe u(BoolAlg(2));
  const HFSet e = HFSet::empty();
  const HFSet one = HFSet::ordinal(1);
  const TransferReport a =
      check_restricted_transfer(u, parse_formula("forall u in x . exists v in y . u in v"), {{"x", one}, {"y", HFSet::singleton(one)}});
  EXPECT_TRUE(a.holds && a.classical && a.boolean.is_one());
  const TransferReport b = check_restricted_transfer(u, parse_formula("x = y"), {{"x", e}, {"y", e}});
  EXPECT_TRUE(b.holds && b.classical);
  const TransferReport c = check_restricted_transfer(u, parse_formula("x in y"), {{"x", one}, {"y", one}});
  EXPECT_TRUE(c.holds && !c.classical && c.boolean.is_zero());
  EXPECT_THROW(check_restricted_transfer(u, parse_formula("exists v . v = x"), {{"x", e}}), Error);
}

TEST_F(B4, MaximumPrinciple) {
  const SetId one = u.name(HFSet::ordinal(1));
  const SetId z = u.make(std::vector<std::pair<SetId, Elem>>{{e, p}, {one, q}});
  const Fragment frag = enumerate_universe(u, 2);
  const MaxWitness w = find_max_witness(u, parse_formula("x in y"), "x", {{"y", z}}, frag);
  EXPECT_TRUE(w.value.is_one());
  EXPECT_TRUE(u.truth_mem(w.witness, z).is_one());
  const std::vector<Elem> pq{p, q};
  const std::vector<SetId> xs{e, one};
  EXPECT_TRUE(u.truth_eq(w.witness, u.mix(pq, xs)).is_one());

  const MaxWitness trivial = find_max_witness(u, parse_formula("x = x"), "x", {}, frag);
  EXPECT_TRUE(trivial.value.is_one());
  EXPECT_TRUE(u.truth_eq(trivial.witness, frag[0]).is_one());

  const MaxWitness none = find_max_witness(u, parse_formula("x in x"), "x", {}, frag);
  EXPECT_TRUE(none.value.is_zero());
  EXPECT_THROW(find_max_witness(u, parse_formula("x in x"), "x", {}, Fragment{}), Error);
}

TEST_F(B4, Ordinals) {
  const OrdinalReport two = ordinal_ops(u, u.name(HFSet::ordinal(2)));
  EXPECT_TRUE(two.truth.is_one());
  ASSERT_TRUE(two.blocks);
  for (std::size_t k = 0; k < two.blocks->size(); ++k)
    EXPECT_EQ((*two.blocks)[k].is_one(), two.ordinals[k] == 2);

  const std::vector<Elem> pq{p, q};
  const std::vector<SetId> names{u.name(HFSet::ordinal(0)), u.name(HFSet::ordinal(1))};
  const OrdinalReport mixed = ordinal_ops(u, u.mix(pq, names));
  EXPECT_TRUE(mixed.truth.is_one());
  ASSERT_TRUE(mixed.blocks);
  for (std::size_t k = 0; k < mixed.blocks->size(); ++k) {
    if (mixed.ordinals[k] == 0) EXPECT_EQ((*mixed.blocks)[k], p);
    else if (mixed.ordinals[k] == 1) EXPECT_EQ((*mixed.blocks)[k], q);
    else EXPECT_TRUE((*mixed.blocks)[k].is_zero());
  }

  const SetId odd = u.name(HFSet::parse("{{},{{{}}}}"));
  const OrdinalReport r = ordinal_ops(u, odd);
  EXPECT_FALSE(r.truth.is_one());
  EXPECT_FALSE(r.blocks);
}

TEST(Evaluator, PsiRho) {
  for (int n = 1; n <= 3; ++n) {
    Universe u{BoolAlg(n)};
    for (const auto& perm : all_permutations(n)) {
      const Hom rho = Hom::permutation(u.algebra(), perm);
      const SetId psi = psi_rho(u, rho);
      for (const Elem& b : u.algebra().elements()) EXPECT_EQ(u.truth_mem(u.name(element_code(b)), psi), rho(b));
      EXPECT_TRUE(eval_bv(u, ultrafilter_formula(), ultrafilter_assignment(u, psi)).is_one());
    }
  }
  Universe u{BoolAlg(2)};
  const Elem p = u.algebra().atom(0);
  const std::vector<int> swap{1, 0};
  EXPECT_EQ(u.truth_mem(u.name(element_code(p)), psi_rho(u, Hom::permutation(u.algebra(), swap))), u.algebra().atom(1));
}

TEST(Evaluator, Tautologies) {
  Universe u(BoolAlg(2));
  Rng rng(13);
  const Fragment frag = enumerate_universe(u, 3);
  for (int i = 0; i < 100; ++i) {
    const Formula a = random_restricted_formula(rng, {{"x", "y"}, 2, 0.0});
    const Formula b = random_restricted_formula(rng, {{"x", "y"}, 2, 0.0});
    const Assignment as{{"x", frag[static_cast<std::size_t>(i) % frag.size()]}, {"y", frag[static_cast<std::size_t>(i * 5) % frag.size()]}};
    for (const Formula& t : {fm::disj(a, fm::neg(a)), fm::imp(a, fm::imp(b, a)), fm::imp(fm::conj(a, b), fm::disj(b, a)),
                             fm::imp(fm::neg(fm::neg(a)), a)})
      EXPECT_TRUE(eval_bv(u, t, as).is_one()) << to_string(t);
  }
}

TEST(Evaluator, BoundedExtensionality) {
  Universe u(BoolAlg(2));
  const Formula f = parse_formula("(forall x in a . x in b) /\\ (forall x in b . x in a) -> a = b");
  const Fragment frag = enumerate_universe(u, 3);
  for (SetId a : frag)
    for (SetId b : frag) EXPECT_TRUE(eval_bv(u, f, {{"a", a}, {"b", b}}).is_one());
}

TEST(Evaluator, BoundedQuantifierMatchesDescent) {
  Universe u(BoolAlg(2));
  Rng rng(21);
  const Fragment frag = enumerate_universe(u, 3);
  for (int i = 0; i < 60; ++i) {
    // The identity needs [[z != 0]] = 1, otherwise the descent is empty.
    SetId z = u.empty_set();
    while (u.eq_bits(z, u.empty_set()) != 0) z = random_set(u, rng, 3, 3);
    const SetId x = frag[static_cast<std::size_t>(i) % frag.size()];
    const Formula body = random_restricted_formula(rng, {{"t", "x"}, 2, 0.0});
    Elem expected = u.algebra().one();
    for (SetId t : descent(u, z, frag)) expected = expected & eval_bv(u, body, {{"t", t}, {"x", x}});
    EXPECT_EQ(eval_bv(u, fm::forall_in("t", Term::var("z"), body), {{"z", z}, {"x", x}}), expected) << to_string(body);
  }
}

TEST(Evaluator, Substitution) {
  Universe u(BoolAlg(2));
  Rng rng(17);
  const Fragment frag = enumerate_universe(u, 3);
  for (int i = 0; i < 200; ++i) {
    const Formula f = random_restricted_formula(rng, {{"x", "z"}, 3, 0.1});
    const SetId x = frag[static_cast<std::size_t>(i * 3) % frag.size()];
    const SetId y = frag[static_cast<std::size_t>(i * 7 + 1) % frag.size()];
    const SetId z = frag[static_cast<std::size_t>(i * 11 + 2) % frag.size()];
    EXPECT_TRUE(leq(u.truth_eq(x, y) & eval_bv(u, f, {{"x", x}, {"z", z}}), eval_bv(u, f, {{"x", y}, {"z", z}})));
  }
}

}  // namespace
}  // namespace bvm
