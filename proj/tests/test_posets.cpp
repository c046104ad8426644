#include <gtest/gtest.h>

#include "bvm/posets.hpp"
#include "bvm/random.hpp"

namespace bvm {
namespace {

int at(const FinPoset& P, const char* label) {
  const auto p = P.find(label);
  if (!p) throw Error(Errc::UnknownSymbol, label);
  return *p;
}

Bits subset(const FinPoset& P, Mask m) {
  Bits s = P.empty_set();
  for (int i = 0; i < P.size(); ++i)
    if ((m >> i) & 1U) s.set(static_cast<std::size_t>(i));
  return s;
}

TEST(Posets, Polars) {
  const FinPoset C = forcing_c(1, 2);
  EXPECT_EQ(polar(C, C.empty_set()), C.whole());
  EXPECT_EQ(polar(C, C.whole()), C.single(at(C, "0")));
  Bits expected = C.single(at(C, "0"));
  expected.set(static_cast<std::size_t>(at(C, "f1")));
  EXPECT_EQ(polar(C, C.single(at(C, "f0"))), expected);
}

TEST(Posets, ForcingSizes) {
  EXPECT_EQ(forcing_c(1, 2).size(), 4);
  EXPECT_EQ(forcing_c(2, 2).size(), 10);
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      std::size_t expected = 0;
      std::size_t binom = 1;
      std::size_t power = 1;
      for (int k = 0; k <= n; ++k) {
        expected += binom * power;
        binom = binom * static_cast<std::size_t>(n - k) / static_cast<std::size_t>(k + 1);
        power *= static_cast<std::size_t>(m);
      }
      EXPECT_EQ(forcing_c_count(n, m), expected);
      EXPECT_EQ(static_cast<std::size_t>(forcing_c(n, m).size()), expected + 1);
    }
  EXPECT_EQ(forcing_c(3, 2, 2).size(), 1 + 1 + 6);
  EXPECT_EQ(forcing_c(2, 2, 7).size(), forcing_c(2, 2).size());
  EXPECT_THROW(forcing_c(6, 6, std::nullopt, 1000), Error);
}

TEST(Posets, Completions) {
  const Completion chain = completion(FinPoset::chain(3));
  EXPECT_EQ(chain.algebra.atom_count(), 1);
  const FinPoset C = forcing_c(1, 2);
  const Completion c = completion(C);
  ASSERT_EQ(c.algebra.atom_count(), 2);
  EXPECT_EQ(c.algebra.atom_name(0), "[f0]");
  EXPECT_EQ(c.algebra.atom_name(1), "[f1]");
  EXPECT_TRUE(c.band_of(C, at(C, "e")).is_one());
  EXPECT_TRUE(c.band_of(C, at(C, "0")).is_zero());
  for (int k = 1; k <= 5; ++k) {
    const Completion a = completion(FinPoset::antichain(k));
    EXPECT_EQ(a.algebra.atom_count(), k);
    ASSERT_TRUE(a.bands);
    EXPECT_EQ(a.bands->size(), std::size_t{1} << k);
  }
  EXPECT_THROW(completion(FinPoset::chain(0)), Error);
  EXPECT_NE(completion_dot(C, c).find("digraph"), std::string::npos);
}

TEST(Posets, Refinedness) {
  const RefinedReport chain = refinedness_conditions(FinPoset::chain(3));
  EXPECT_TRUE(chain.consistent());
  EXPECT_FALSE(chain.separation);
  EXPECT_FALSE(chain.injective);
  EXPECT_FALSE(is_refined(FinPoset::chain(3)));
  EXPECT_TRUE(is_refined(FinPoset::chain(2)));
  EXPECT_TRUE(is_refined(forcing_c(1, 2)));
  for (int k = 1; k <= 4; ++k) EXPECT_TRUE(is_refined(FinPoset::boolean(k)));
}

// Refinedness of C(n, m) needs two values: with m = 1 every pair of
// functions is compatible.
TEST(Posets, ForcingRefinedness) {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 2; m <= 3; ++m) EXPECT_TRUE(is_refined(forcing_c(n, m))) << n << "," << m;
    EXPECT_FALSE(is_refined(forcing_c(n, 1)));
  }
}

// p > x, y, z and q > x, z: (c) holds while (a), (b) and (d) fail.
TEST(Posets, ConditionsCanDisagree) {
  const FinPoset P = FinPoset::from_pairs(
      {"0", "x", "y", "z", "p", "q"},
      {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}, {1, 5}, {3, 5}});
  const RefinedReport r = refinedness_conditions(P);
  EXPECT_FALSE(r.separation);
  EXPECT_FALSE(r.principal_is_interval);
  EXPECT_TRUE(r.injective);
  EXPECT_FALSE(r.dense_embedding);
  EXPECT_THROW(is_refined(P), Error);
}

std::vector<FinPoset> all_posets(int n) {
  // Every order on 0..n-1 with 0 as bottom, as relation bitmasks over the
  // other points; duplicates up to isomorphism are harmless here.
  std::vector<FinPoset> out;
  const int k = n - 1;
  std::vector<std::pair<int, int>> slots;
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b)
      if (a != b) slots.emplace_back(a, b);
  for (Mask m = 0; m < (Mask{1} << slots.size()); ++m) {
    std::vector<std::vector<bool>> leq(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int a = 0; a < n; ++a) {
      leq[0][static_cast<std::size_t>(a)] = true;
      leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = true;
    }
    for (std::size_t s = 0; s < slots.size(); ++s)
      if ((m >> s) & 1U) leq[static_cast<std::size_t>(slots[s].first)][static_cast<std::size_t>(slots[s].second)] = true;
    bool order = true;
    for (int a = 0; a < n && order; ++a)
      for (int b = 0; b < n && order; ++b) {
        if (a != b && leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] && leq[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]) order = false;
        for (int c = 0; c < n && order; ++c)
          if (leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] && leq[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] &&
              !leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)])
            order = false;
      }
    if (!order) continue;
    std::vector<std::string> labels{"0"};
    for (int a = 1; a <= k; ++a) labels.push_back("p" + std::to_string(a));
    out.emplace_back(labels, leq);
  }
  return out;
}

TEST(Posets, ExhaustiveUpToFive) {
  std::size_t inconsistent = 0;
  for (int n = 2; n <= 5; ++n)
    for (const FinPoset& P : all_posets(n)) {
      const Completion c = completion(P);
      ASSERT_TRUE(c.bands);
      // Double polar closure on every subset.
      for (Mask m = 0; m < (Mask{1} << n); ++m) {
        const Bits A = subset(P, m);
        EXPECT_EQ(polar(P, polar(P, polar(P, A))), polar(P, A));
      }
      for (const Bits& K : *c.bands) {
        const Bits Kp = polar(P, K);
        EXPECT_EQ(K & Kp, P.single(0));
        EXPECT_EQ(polar(P, polar(P, K | Kp)), P.whole());
      }
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (P.leq(a, b)) EXPECT_TRUE(leq(c.band_of(P, a), c.band_of(P, b)));
      const RefinedReport r = refinedness_conditions(P);
      if (!r.consistent()) ++inconsistent;
      if (r.consistent() && r.separation)
        for (const Bits& K : *c.bands) {
          if (K == P.single(0)) continue;
          bool dense = false;
          for (int p = 0; p < n && !dense; ++p) dense = p != 0 && leq(c.band_of(P, p), c.elem_of(K));
          EXPECT_TRUE(dense);
        }
    }
  EXPECT_EQ(inconsistent, 0U);
}

TEST(Posets, SixPointDisagreementsExist) {
  std::size_t inconsistent = 0;
  for (const FinPoset& P : all_posets(6))
    if (!refinedness_conditions(P).consistent()) ++inconsistent;
  EXPECT_GT(inconsistent, 0U);
}

TEST(Posets, RandomCompletionsAreBoolean) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const FinPoset P = random_poset(rng, 2 + i % 11);
    const Completion c = completion(P);
    for (const Bits& K : c.atom_bands) EXPECT_EQ(polar(P, polar(P, K)), K);
    for (int a = 0; a < P.size(); ++a)
      for (int b = 0; b < P.size(); ++b)
        if (P.leq(a, b)) EXPECT_TRUE(leq(c.band_of(P, a), c.band_of(P, b)));
  }
}

}  // namespace
}  // namespace bvm
