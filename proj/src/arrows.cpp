#include "bvm/arrows.hpp"

#include <optional>

namespace bvm {

std::vector<SetId> descent(Universe& u, SetId x, const Fragment& fragment) {
  std::vector<SetId> out;
  for (SetId y : fragment)
    if (u.truth_mem(y, x).is_one()) out.push_back(y);
  return out;
}

bool is_extensional(Universe& u, const ExtMap& f) {
  if (f.source.size() != f.image.size()) throw Error(Errc::LengthMismatch, "map source and image differ in length");
  for (std::size_t i = 0; i < f.source.size(); ++i)
    for (std::size_t j = i + 1; j < f.source.size(); ++j) {
      const Mask eq = u.eq_bits(f.source[i], f.source[j]);
      if ((eq & ~u.eq_bits(f.image[i], f.image[j])) != 0) return false;
    }
  return true;
}

bool is_extensional(Universe& u, const Correspondence& phi) {
  for (const auto& [x1, y1] : phi)
    for (const auto& other : phi) {
      const SetId x2 = other.first;
      Mask reach = 0;
      for (const auto& [x, y2] : phi)
        if (x == x2) reach |= u.eq_bits(y1, y2);
      if ((u.eq_bits(x1, x2) & ~reach) != 0) return false;
    }
  return true;
}

Correspondence inverse(const Correspondence& phi) {
  Correspondence out;
  out.reserve(phi.size());
  for (const auto& [x, y] : phi) out.emplace_back(y, x);
  return out;
}

SetId ascend_function(Universe& u, const ExtMap& f) {
  if (!is_extensional(u, f)) throw Error(Errc::NotExtensional, "map is not extensional");
  std::vector<Entry> graph;
  graph.reserve(f.source.size());
  for (std::size_t i = 0; i < f.source.size(); ++i)
    graph.push_back({u.pair(f.source[i], f.image[i]), u.algebra().full_mask()});
  return u.make_bits(std::move(graph));
}

SetId ascend_modified(Universe& u, const std::vector<HFSet>& source, const std::vector<SetId>& image) {
  if (source.size() != image.size()) throw Error(Errc::LengthMismatch, "map source and image differ in length");
  std::vector<SetId> names;
  names.reserve(source.size());
  for (const HFSet& h : source) names.push_back(u.name(h));
  return ascend_function(u, {std::move(names), image});
}

const Formula& function_formula() {
  static const Formula f = parse_formula(
      "(forall w in g . exists x in X . exists y in Y . w = pair(x,y)) /\\ "
      "(forall x in X . exists y in Y . pair(x,y) in g) /\\ "
      "(forall x in X . forall y in Y . forall z in Y . pair(x,y) in g /\\ pair(x,z) in g -> y = z)");
  return f;
}

ExtMap descend_function(Universe& u, SetId g, SetId X, SetId Y, const Fragment& fragment) {
  if (!eval_bv(u, function_formula(), {{"g", g}, {"X", X}, {"Y", Y}}).is_one())
    throw Error(Errc::NotAFunction, "[[g : X -> Y]] is not one");
  ExtMap out;
  const std::vector<SetId> ys = descent(u, Y, fragment);
  for (SetId x : descent(u, X, fragment)) {
    std::optional<SetId> value;
    for (SetId z : ys)
      if (u.truth_mem(u.pair(x, z), g).is_one()) {
        value = z;
        break;
      }
    if (!value) throw Error(Errc::RankInsufficient, "value of the descended function lies outside the fragment");
    out.source.push_back(x);
    out.image.push_back(*value);
  }
  return out;
}

bool same_classes(Universe& u, std::span<const SetId> a, std::span<const SetId> b) {
  const Fragment fa(u, a);
  const Fragment fb(u, b);
  if (fa.size() != fb.size()) return false;
  for (SetId x : fa)
    if (!fb.find(u, x)) return false;
  return true;
}

TwoPointDescent descend_two_point(Universe& u) {
  const BoolAlg& alg = u.algebra();
  if (alg.atom_count() > 12) throw Error(Errc::RankInsufficient, "two-point descent needs at most 12 atoms");
  TwoPointDescent r;
  const HFSet h0 = HFSet::ordinal(0);
  const HFSet h1 = HFSet::ordinal(1);
  r.zero = u.name(h0);
  r.one = u.name(h1);
  r.two = u.name(HFSet::ordinal(2));

  const auto elems = alg.elements();
  r.truth_values_ok = true;
  for (const Elem& b : elems) {
    const std::vector<Elem> parts{b, complement(b)};
    const std::vector<SetId> xs{r.one, r.zero};
    const SetId c = u.canonicalize(u.mix(parts, xs));
    r.chi.push_back(c);
    if (u.truth_eq(c, r.one) != b || u.truth_eq(c, r.zero) != complement(b))
      r.truth_values_ok = false;
  }

  const Fragment level = enumerate_universe(u, 2, std::size_t{1} << 24);
  const std::vector<SetId> down = descent(u, r.two, level);
  r.bijective = down.size() == elems.size() && same_classes(u, down, r.chi) &&
                Fragment(u, r.chi).size() == elems.size();

  // Standard names of the classical tables on {0, 1}.
  std::vector<HFSet> join_graph, meet_graph, neg_graph;
  for (int a = 0; a < 2; ++a) {
    const HFSet ha = a ? h1 : h0;
    neg_graph.push_back(HFSet::kpair(ha, a ? h0 : h1));
    for (int b = 0; b < 2; ++b) {
      const HFSet hb = b ? h1 : h0;
      join_graph.push_back(HFSet::kpair(HFSet::kpair(ha, hb), (a | b) ? h1 : h0));
      meet_graph.push_back(HFSet::kpair(HFSet::kpair(ha, hb), (a & b) ? h1 : h0));
    }
  }
  const SetId join_name = u.name(HFSet(join_graph));
  const SetId meet_name = u.name(HFSet(meet_graph));
  const SetId neg_name = u.name(HFSet(neg_graph));

  auto apply = [&](SetId graph, SetId arg) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < r.chi.size(); ++k)
      if (u.truth_mem(u.pair(arg, r.chi[k]), graph).is_one()) return k;
    return std::nullopt;
  };
  r.preserves_ops = r.bijective;
  for (std::size_t b = 0; b < elems.size() && r.preserves_ops; ++b) {
    if (apply(neg_name, r.chi[b]) != (~b & alg.full_mask())) r.preserves_ops = false;
    for (std::size_t c = 0; c < elems.size() && r.preserves_ops; ++c) {
      const SetId arg = u.pair(r.chi[b], r.chi[c]);
      if (apply(join_name, arg) != (b | c) || apply(meet_name, arg) != (b & c)) r.preserves_ops = false;
    }
  }
  return r;
}

}  // namespace bvm
