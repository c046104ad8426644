#include <gtest/gtest.h>

#include "bvm/random.hpp"
#include "bvm/universe.hpp"

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

TEST_F(B4, StandardNames) {
  EXPECT_EQ(u.name(HFSet::empty()), e);
  const SetId one = u.name(HFSet::ordinal(1));
  ASSERT_EQ(u.entries(one).size(), 1U);
  EXPECT_EQ(u.entries(one)[0].child, e);
  EXPECT_EQ(u.entries(one)[0].value, alg.full_mask());
}

TEST(Universe, NamesTransferMembership) {
  Universe u(BoolAlg(3));
  const auto level = cumulative_level(4);
  ASSERT_EQ(level.size(), 16U);
  for (const HFSet& a : level)
    for (const HFSet& b : level) {
      EXPECT_EQ(b.contains(a), u.truth_mem(u.name(a), u.name(b)).is_one());
      EXPECT_EQ(a == b, u.truth_eq(u.name(a), u.name(b)).is_one());
    }
}

TEST_F(B4, WorkedTruthValues) {
  EXPECT_TRUE(u.truth_eq(e, e).is_one());
  EXPECT_EQ(u.truth_mem(e, y), p);
  EXPECT_EQ(u.truth_eq(y, e), ~p);
}

TEST_F(B4, Normalize) {
  const SetId vanishing = u.make(std::vector<std::pair<SetId, Elem>>{{e, alg.zero()}});
  EXPECT_EQ(u.normalize(vanishing), e);
  EXPECT_EQ(u.normalize(y), y);
  // Two different ids for the empty set, then merged under p and q.
  const SetId z1 = e;
  const SetId z2 = u.make(std::vector<std::pair<SetId, Elem>>{{u.name(HFSet::ordinal(1)), alg.zero()}});
  ASSERT_NE(z1, z2);
  ASSERT_TRUE(u.truth_eq(z1, z2).is_one());
  const SetId x = u.make(std::vector<std::pair<SetId, Elem>>{{z1, p}, {z2, q}});
  const SetId n = u.normalize(x);
  ASSERT_EQ(u.entries(n).size(), 1U);
  EXPECT_EQ(u.entries(n)[0].value, alg.full_mask());
  EXPECT_TRUE(u.truth_eq(n, x).is_one());
}

TEST_F(B4, Scale) {
  EXPECT_TRUE(u.truth_eq(u.scale(alg.one(), y), y).is_one());
  EXPECT_TRUE(u.truth_eq(u.scale(alg.zero(), y), e).is_one());
  EXPECT_TRUE(u.truth_mem(e, u.scale(q, y)).is_zero());
}

TEST_F(B4, Mix) {
  const std::vector<Elem> one{alg.one()};
  const std::vector<SetId> just_y{y};
  EXPECT_TRUE(u.truth_eq(u.mix(one, just_y), y).is_one());
  const std::vector<Elem> pq{p, q};
  const std::vector<SetId> xs{e, u.name(HFSet::ordinal(1))};
  const SetId m = u.mix(pq, xs);
  EXPECT_TRUE(leq(p, u.truth_eq(m, e)));
  EXPECT_EQ(u.truth_eq(m, xs[0]), p);
  EXPECT_EQ(u.truth_eq(m, xs[1]), q);
}

TEST_F(B4, Collapse) {
  EXPECT_EQ(u.collapse(0, y), HFSet::ordinal(1));
  EXPECT_EQ(u.collapse(1, y), HFSet::empty());
  for (const HFSet& h : cumulative_level(4))
    for (int atom = 0; atom < 2; ++atom) EXPECT_EQ(u.collapse(atom, u.name(h)), h);
}

TEST(Universe, PiStarAgreesWithCollapse) {
  Universe u(BoolAlg(3));
  Universe two(BoolAlg(1));
  Rng rng(11);
  for (int i = 0; i < 60; ++i) {
    const SetId x = random_set(u, rng, 4, 3);
    for (int atom = 0; atom < 3; ++atom) {
      const Hom pi = Hom::projection(u.algebra(), two.algebra(), atom);
      EXPECT_EQ(two.collapse(0, u.pi_star(pi, x, two)), u.collapse(atom, x));
    }
  }
}

TEST(Universe, Enumeration) {
  Universe two(BoolAlg(1));
  EXPECT_EQ(enumerate_universe(two, 2).size(), 2U);
  Universe b4(BoolAlg(2));
  const Fragment f = enumerate_universe(b4, 2);
  ASSERT_EQ(f.size(), 4U);
  const Elem p = b4.algebra().atom(0);
  const SetId e = b4.empty_set();
  const SetId one = b4.name(HFSet::ordinal(1));
  for (const std::vector<std::pair<SetId, Elem>>& es :
       {std::vector<std::pair<SetId, Elem>>{}, {{e, p}}, {{e, ~p}}, {{e, b4.algebra().one()}}})
    EXPECT_TRUE(f.find(b4, b4.make(es)).has_value());
  EXPECT_TRUE(f.find(b4, one).has_value());
  EXPECT_EQ(enumerate_universe(b4, 0).size(), 1U);
  EXPECT_EQ(enumerate_universe(b4, 3).size(), 16U);
  Universe b8(BoolAlg(3));
  EXPECT_THROW(enumerate_universe(b8, 4, 1000), Error);
}

TEST(Universe, FiberSoundnessOnFragments) {
  for (int atoms = 1; atoms <= 3; ++atoms) {
    Universe u{BoolAlg(atoms)};
    const Fragment f = enumerate_universe(u, 3);
    for (SetId x : f)
      for (SetId y : f) {
        Mask mem = 0;
        Mask eq = 0;
        for (int q = 0; q < atoms; ++q) {
          if (u.collapse(q, y).contains(u.collapse(q, x))) mem |= Mask{1} << q;
          if (u.collapse(q, x) == u.collapse(q, y)) eq |= Mask{1} << q;
        }
        EXPECT_EQ(u.mem_bits(x, y), mem);
        EXPECT_EQ(u.eq_bits(x, y), eq);
      }
  }
}

TEST(Universe, LawsOnFragment) {
  Universe u(BoolAlg(2));
  const Fragment f = enumerate_universe(u, 3);
  for (SetId x : f) {
    EXPECT_TRUE(u.truth_eq(x, x).is_one());
    for (SetId y : f) {
      EXPECT_EQ(u.truth_eq(x, y), u.truth_eq(y, x));
      for (SetId z : f) {
        EXPECT_TRUE(leq(u.truth_eq(x, y) & u.truth_eq(y, z), u.truth_eq(x, z)));
        EXPECT_TRUE(leq(u.truth_eq(x, y) & u.truth_mem(z, x), u.truth_mem(z, y)));
        EXPECT_TRUE(leq(u.truth_eq(x, y) & u.truth_mem(x, z), u.truth_mem(y, z)));
      }
      for (const Elem& b : u.algebra().elements()) {
        EXPECT_EQ(u.truth_mem(x, u.scale(b, y)), b & u.truth_mem(x, y));
        EXPECT_EQ(u.truth_eq(u.scale(b, x), u.scale(b, y)), imp(b, u.truth_eq(x, y)));
      }
    }
    for (const Elem& b : u.algebra().elements()) {
      EXPECT_EQ(u.truth_eq(u.scale(b, x), x), b | u.truth_eq(x, u.empty_set()));
      EXPECT_EQ(u.truth_eq(u.scale(b, x), u.empty_set()), ~b | u.truth_eq(x, u.empty_set()));
    }
  }
}

TEST(Universe, NormalFormsDecideTruthEquality) {
  Universe u(BoolAlg(2));
  Rng rng(5);
  std::vector<SetId> xs;
  for (int i = 0; i < 40; ++i) xs.push_back(random_set(u, rng, 4, 3));
  for (SetId x : xs) {
    const SetId n = u.normalize(x);
    EXPECT_EQ(u.normalize(n), n);
    EXPECT_TRUE(u.truth_eq(n, x).is_one());
    for (SetId y : xs)
      EXPECT_EQ(u.truth_eq(x, y).is_one(), u.canonicalize(x) == u.canonicalize(y));
  }
}

TEST(Universe, Pairs) {
  Universe u(BoolAlg(2));
  const SetId e = u.empty_set();
  for (int atom = 0; atom < 2; ++atom)
    EXPECT_EQ(u.collapse(atom, u.pair(e, e)), HFSet::parse("{{{}}}"));
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    const SetId x = random_set(u, rng, 3, 2);
    const SetId y = random_set(u, rng, 3, 2);
    const SetId x2 = random_set(u, rng, 3, 2);
    const SetId y2 = random_set(u, rng, 3, 2);
    for (int atom = 0; atom < 2; ++atom)
      EXPECT_EQ(u.collapse(atom, u.pair(x, y)), HFSet::kpair(u.collapse(atom, x), u.collapse(atom, y)));
    EXPECT_EQ(u.truth_eq(u.pair(x, y), u.pair(x2, y2)), u.truth_eq(x, x2) & u.truth_eq(y, y2));
  }
}

TEST(Universe, ForeignElementsAreRejected) {
  Universe u(BoolAlg(2));
  BoolAlg other(2);
  EXPECT_THROW(u.make(std::vector<std::pair<SetId, Elem>>{{u.empty_set(), other.one()}}), Error);
}

}  // namespace
}  // namespace bvm
