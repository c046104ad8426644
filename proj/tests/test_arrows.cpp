#include <gtest/gtest.h>

#include <algorithm>

#include "bvm/arrows.hpp"
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
  SetId one = u.name(HFSet::ordinal(1));
  Fragment rank2 = enumerate_universe(u, 2);
  Fragment rank3 = enumerate_universe(u, 3);
};

TEST_F(B4, Descent) {
  const auto single = descent(u, one, rank2);
  ASSERT_EQ(single.size(), 1U);
  EXPECT_TRUE(u.truth_eq(single[0], e).is_one());
  EXPECT_TRUE(descent(u, e, rank2).empty());
  EXPECT_EQ(descent(u, u.name(HFSet::ordinal(2)), rank3).size(), 4U);
}

TEST_F(B4, Ascent) {
  EXPECT_EQ(u.ascent(std::vector<SetId>{}), e);
  EXPECT_TRUE(u.truth_eq(u.ascent(std::vector<SetId>{e}), one).is_one());
  const std::vector<SetId> xs{e, one};
  const auto down = descent(u, u.ascent(xs), rank3);
  EXPECT_EQ(down.size(), 4U);
  EXPECT_TRUE(same_classes(u, down, mix_closure(u, xs)));
}

TEST_F(B4, MixClosure) {
  EXPECT_EQ(mix_closure(u, std::vector<SetId>{one}).size(), 1U);
  const std::vector<SetId> xs{e, one};
  const auto closed = mix_closure(u, xs);
  EXPECT_EQ(closed.size(), 4U);
  EXPECT_TRUE(same_classes(u, mix_closure(u, closed), closed));
}

TEST_F(B4, Extensionality) {
  const std::vector<SetId> xs{e, one};
  for (SetId a : rank3)
    for (SetId b : rank3) EXPECT_TRUE(is_extensional(u, ExtMap{xs, {a, b}}));
  const std::vector<SetId> ys{one, u.name(HFSet::ordinal(2)), u.make(std::vector<std::pair<SetId, Elem>>{{e, p}})};
  EXPECT_TRUE(is_extensional(u, ExtMap{ys, ys}));
  // [[x1 = x2]] = p but [[f(x1) = f(x2)]] = q.
  const SetId x2 = u.make(std::vector<std::pair<SetId, Elem>>{{e, q}});
  const SetId y2 = u.make(std::vector<std::pair<SetId, Elem>>{{e, p}});
  ASSERT_EQ(u.truth_eq(e, x2), p);
  ASSERT_EQ(u.truth_eq(e, y2), q);
  const ExtMap bad{{e, x2}, {e, y2}};
  EXPECT_FALSE(is_extensional(u, bad));
  EXPECT_THROW(ascend_function(u, bad), Error);
}

// Phi is extensional while its inverse is not: searched over B4.
TEST_F(B4, CorrespondenceInverse) {
  bool found = false;
  for (SetId a : rank2)
    for (SetId b : rank2)
      for (SetId c : rank2)
        for (SetId d : rank2) {
        const Correspondence phi{{a, c}, {b, d}};
        if (is_extensional(u, phi) && !is_extensional(u, inverse(phi))) found = true;
        EXPECT_EQ(inverse(inverse(phi)), phi);
        }
  EXPECT_TRUE(found);
}

TEST_F(B4, FunctionRoundTrips) {
  const std::vector<SetId> xs{e, one};
  const ExtMap id{xs, xs};
  const SetId X = u.ascent(xs);
  const SetId g = ascend_function(u, id);
  EXPECT_TRUE(eval_bv(u, function_formula(), {{"g", g}, {"X", X}, {"Y", X}}).is_one());
  const ExtMap back = descend_function(u, g, X, X, rank3);
  ASSERT_EQ(back.source.size(), 4U);
  for (std::size_t i = 0; i < back.source.size(); ++i) EXPECT_TRUE(u.truth_eq(back.source[i], back.image[i]).is_one());
  EXPECT_THROW(descend_function(u, X, X, X, rank3), Error);
}

TEST_F(B4, NamedFunctionsDescendPointwise) {
  const HFSet zero = HFSet::ordinal(0);
  const HFSet unit = HFSet::ordinal(1);
  const HFSet h({HFSet::kpair(zero, unit), HFSet::kpair(unit, zero)});
  const SetId X = u.name(HFSet::ordinal(2));
  const ExtMap f = descend_function(u, u.name(h), X, X, rank3);
  for (std::size_t i = 0; i < f.source.size(); ++i) {
    if (u.truth_eq(f.source[i], u.name(zero)).is_one()) EXPECT_TRUE(u.truth_eq(f.image[i], u.name(unit)).is_one());
    if (u.truth_eq(f.source[i], u.name(unit)).is_one()) EXPECT_TRUE(u.truth_eq(f.image[i], u.name(zero)).is_one());
  }
  const std::vector<HFSet> src{zero, unit};
  const std::vector<SetId> img{u.name(unit), u.name(zero)};
  EXPECT_TRUE(u.truth_eq(ascend_modified(u, src, img), u.name(h)).is_one());
}

SetId mixed_graph(Universe& u, const Elem& b, const ExtMap& f1, const ExtMap& f2) {
  const std::vector<Elem> parts{b, ~b};
  const std::vector<SetId> graphs{ascend_function(u, f1), ascend_function(u, f2)};
  return u.mix(parts, graphs);
}

ExtMap invert(const ExtMap& f) { return {f.image, f.source}; }

TEST_F(B4, InternalInverseDescends) {
  const std::vector<SetId> xs{e, one, u.name(HFSet::ordinal(2))};
  const ExtMap f1{xs, {xs[1], xs[2], xs[0]}};
  const ExtMap f2{xs, {xs[2], xs[0], xs[1]}};
  const SetId X = u.ascent(xs);
  const Fragment frag = enumerate_universe(u, 4, 1U << 20);
  for (const Elem& b : alg.elements()) {
    const ExtMap down = descend_function(u, mixed_graph(u, b, f1, f2), X, X, frag);
    const ExtMap down_inv = descend_function(u, mixed_graph(u, b, invert(f1), invert(f2)), X, X, frag);
    const ExtMap inv = invert(down);
    for (std::size_t i = 0; i < inv.source.size(); ++i) {
      std::size_t j = 0;
      while (j < down_inv.source.size() && !u.truth_eq(down_inv.source[j], inv.source[i]).is_one()) ++j;
      ASSERT_LT(j, down_inv.source.size());
      EXPECT_TRUE(u.truth_eq(down_inv.image[j], inv.image[i]).is_one());
    }
  }
}

TEST_F(B4, CompositionDescends) {
  Rng rng(31);
  const std::vector<SetId> xs{e, one};
  const SetId X = u.ascent(xs);
  const auto pick = [&](const std::vector<SetId>& from) {
    ExtMap f{from, {}};
    for (std::size_t i = 0; i < from.size(); ++i) f.image.push_back(xs[std::uniform_int_distribution<std::size_t>(0, 1)(rng)]);
    return f;
  };
  const Formula composite = parse_formula("exists t in Y . pair(x, t) in g1 /\\ pair(t, z) in g2");
  for (int i = 0; i < 12; ++i) {
    const Elem b = random_elem(alg, rng);
    const SetId g1 = mixed_graph(u, b, pick(xs), pick(xs));
    const SetId g2 = mixed_graph(u, ~b, pick(xs), pick(xs));
    const ExtMap d1 = descend_function(u, g1, X, X, rank3);
    const ExtMap d2 = descend_function(u, g2, X, X, rank3);
    for (std::size_t k = 0; k < d1.source.size(); ++k) {
      std::size_t j = 0;
      while (j < d2.source.size() && !u.truth_eq(d2.source[j], d1.image[k]).is_one()) ++j;
      ASSERT_LT(j, d2.source.size());
      const SetId z = d2.image[j];
      EXPECT_TRUE(eval_bv(u, composite, {{"x", d1.source[k]}, {"z", z}, {"Y", X}, {"g1", g1}, {"g2", g2}}).is_one());
    }
  }
}

TEST(Arrows, DescentContainsAscended) {
  Universe u(BoolAlg(3));
  const Fragment frag = enumerate_universe(u, 3);
  Rng rng(6);
  for (int i = 0; i < 40; ++i) {
    std::vector<SetId> xs;
    for (int k = 0; k < 3; ++k) xs.push_back(frag[std::uniform_int_distribution<std::size_t>(0, frag.size() - 1)(rng)]);
    const auto down = descent(u, u.ascent(xs), frag);
    for (SetId x : xs)
      EXPECT_TRUE(std::any_of(down.begin(), down.end(), [&](SetId d) { return u.truth_eq(d, x).is_one(); }));
  }
}

TEST(Arrows, TwoPointDescent) {
  for (int n = 1; n <= 3; ++n) {
    Universe u{BoolAlg(n)};
    const TwoPointDescent d = descend_two_point(u);
    EXPECT_TRUE(d.ok());
    for (const Elem& b : u.algebra().elements()) {
      EXPECT_EQ(u.truth_eq(d.chi[b.bits], d.one), b);
      EXPECT_EQ(u.truth_eq(d.chi[b.bits], d.zero), ~b);
    }
  }
  Universe b4{BoolAlg(2)};
  const TwoPointDescent d = descend_two_point(b4);
  EXPECT_TRUE(b4.truth_eq(d.chi[b4.algebra().full_mask()], d.one).is_one());
  EXPECT_EQ(b4.truth_eq(d.chi[1], d.zero), b4.algebra().atom(1));
}

}  // namespace
}  // namespace bvm
