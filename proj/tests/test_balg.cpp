#include <gtest/gtest.h>

#include <random>

#include "bvm/balg.hpp"

namespace bvm {
namespace {

class B4 : public ::testing::Test {
 protected:
  BoolAlg alg{2};
  Elem p = alg.atom(0);
  Elem q = alg.atom(1);
};

TEST_F(B4, Implication) {
  EXPECT_EQ(imp(alg.one(), alg.zero()), alg.zero());
  for (const Elem& x : alg.elements()) EXPECT_EQ(imp(alg.zero(), x), alg.one());
  EXPECT_EQ(imp(p, q), q);
}

TEST_F(B4, Aggregates) {
  const std::vector<Elem> pq{p, q};
  EXPECT_EQ(aggregate(alg, pq, Aggregate::Join), alg.one());
  EXPECT_EQ(aggregate(alg, {}, Aggregate::Meet), alg.one());
  EXPECT_EQ(aggregate(alg, {}, Aggregate::Join), alg.zero());
  const std::vector<Elem> pp{p, alg.one(), p};
  EXPECT_EQ(aggregate(alg, pp, Aggregate::Meet), p);
}

TEST_F(B4, Partitions) {
  EXPECT_TRUE(is_partition(alg, std::vector<Elem>{p, q}));
  EXPECT_FALSE(is_partition(alg, std::vector<Elem>{p, p}));
  EXPECT_TRUE(is_partition(alg, std::vector<Elem>{alg.one(), alg.zero()}));
}

TEST_F(B4, Homomorphisms) {
  BoolAlg two(1);
  const Hom pi = Hom::projection(alg, two, 0);
  EXPECT_EQ(pi(p), two.one());
  EXPECT_EQ(pi(q), two.zero());
  const std::vector<int> swap{1, 0};
  const Hom s = Hom::permutation(alg, swap);
  EXPECT_TRUE(s.is_automorphism());
  EXPECT_EQ(s(p), q);
}

TEST_F(B4, SymmetricDifference) {
  for (const Elem& x : alg.elements()) EXPECT_TRUE(symm_diff(x, x).is_zero());
  EXPECT_EQ(symm_diff(p, alg.one()), q);
  EXPECT_EQ(symm_diff(p, q), alg.one());
}

TEST_F(B4, Literals) {
  EXPECT_EQ(alg.parse("{a1}"), p);
  EXPECT_EQ(alg.parse(" { a1 , a2 } "), alg.one());
  EXPECT_EQ(alg.parse("0"), alg.zero());
  EXPECT_EQ(alg.format(q), "{a2}");
  EXPECT_EQ(alg.format(alg.one()), "1");
  EXPECT_THROW(alg.parse("{a3}"), Error);
  EXPECT_THROW(alg.parse("a1"), Error);
}

TEST(BoolAlg, MixedAlgebrasAreRejected) {
  BoolAlg a(2);
  BoolAlg b(2);
  try {
    (void)meet(a.one(), b.one());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AlgebraMismatch);
  }
}

TEST(BoolAlg, LawsExhaustive) {
  for (int n = 1; n <= 4; ++n) {
    BoolAlg alg(n);
    const auto xs = alg.elements();
    for (const Elem& a : xs) {
      EXPECT_EQ(~~a, a);
      for (const Elem& b : xs) {
        EXPECT_EQ(~(a & b), ~a | ~b);
        EXPECT_EQ(~(a | b), ~a & ~b);
        for (const Elem& c : xs) EXPECT_EQ(leq(a & c, b), leq(c, imp(a, b)));
      }
    }
  }
}

TEST(BoolAlg, LawsRandomized) {
  std::mt19937_64 rng(3);
  for (int n : {10, 33, 64}) {
    BoolAlg alg(n);
    std::uniform_int_distribution<Mask> dist;
    for (int i = 0; i < 200; ++i) {
      const Elem a = alg.elem(dist(rng) & alg.full_mask());
      const Elem b = alg.elem(dist(rng) & alg.full_mask());
      const Elem c = alg.elem(dist(rng) & alg.full_mask());
      EXPECT_EQ(~(a & b), ~a | ~b);
      EXPECT_EQ(~~a, a);
      EXPECT_EQ(leq(a & c, b), leq(c, imp(a, b)));
    }
  }
}

TEST(BoolAlg, InfiniteDistributivity) {
  BoolAlg alg(3);
  const auto xs = alg.elements();
  for (Mask family = 0; family < (Mask{1} << xs.size()); family += 7) {
    std::vector<Elem> S;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if ((family >> i) & 1U) S.push_back(xs[i]);
    for (const Elem& b : xs) {
      std::vector<Elem> scaled;
      for (const Elem& s : S) scaled.push_back(b & s);
      EXPECT_EQ(b & aggregate(alg, S, Aggregate::Join), aggregate(alg, scaled, Aggregate::Join));
    }
  }
}

TEST(BoolAlg, HomsPreserveOperations) {
  for (int n = 1; n <= 3; ++n) {
    BoolAlg alg(n);
    BoolAlg two(1);
    std::vector<Hom> homs;
    for (const auto& perm : all_permutations(n)) homs.push_back(Hom::permutation(alg, perm));
    for (int q = 0; q < n; ++q) homs.push_back(Hom::projection(alg, two, q));
    for (const Hom& h : homs)
      for (const Elem& a : alg.elements()) {
        EXPECT_EQ(h(~a), ~h(a));
        for (const Elem& b : alg.elements()) {
          EXPECT_EQ(h(a & b), h(a) & h(b));
          EXPECT_EQ(h(a | b), h(a) | h(b));
        }
      }
  }
}

}  // namespace
}  // namespace bvm
