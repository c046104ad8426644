#pragma once

#include <utility>
#include <vector>

#include "bvm/evaluator.hpp"
#include "bvm/universe.hpp"

namespace bvm {

/// A finite map x_i -> y_i between sets of Boolean-valued sets.
struct ExtMap {
  std::vector<SetId> source;
  std::vector<SetId> image;
};

/// A finite correspondence, as its list of pairs.
using Correspondence = std::vector<std::pair<SetId, SetId>>;

/// {y in fragment : [[y in x]] = 1}.
std::vector<SetId> descent(Universe& u, SetId x, const Fragment& fragment);

/// [[x1 = x2]] <= [[f(x1) = f(x2)]] for all source pairs.
bool is_extensional(Universe& u, const ExtMap& f);
/// y1 in Phi(x1) implies [[x1 = x2]] <= join over y2 in Phi(x2) of [[y1 = y2]].
bool is_extensional(Universe& u, const Correspondence& phi);
Correspondence inverse(const Correspondence& phi);

/// {pair(x, f(x)) -> 1}. Throws NotExtensional.
SetId ascend_function(Universe& u, const ExtMap& f);
/// Ascent of an HF-indexed family: {pair(h^, f(h)) -> 1}.
SetId ascend_modified(Universe& u, const std::vector<HFSet>& source, const std::vector<SetId>& image);

/// States that g is a function from X to Y, all quantifiers bounded.
const Formula& function_formula();

/// The map x -> z on descent(X) with [[pair(x, z) in g]] = 1. Throws
/// NotAFunction when [[g : X -> Y]] is below one and RankInsufficient when
/// some value lies outside the fragment.
ExtMap descend_function(Universe& u, SetId g, SetId X, SetId Y, const Fragment& fragment);

/// Sets of truth-distinct sets compared up to truth equality.
bool same_classes(Universe& u, std::span<const SetId> a, std::span<const SetId> b);

struct TwoPointDescent {
  SetId zero = 0;
  SetId one = 0;
  SetId two = 0;
  /// chi[mask] for every element of the algebra.
  std::vector<SetId> chi;
  bool truth_values_ok = false;
  bool bijective = false;
  bool preserves_ops = false;
  bool ok() const { return truth_values_ok && bijective && preserves_ops; }
};

/// chi(b) = mix(b * 1, ~b * 0) over the standard two-element set, with the
/// descended join, meet and complement read off the standard names of the
/// classical tables. Throws RankInsufficient if the algebra is too large to
/// enumerate.
TwoPointDescent descend_two_point(Universe& u);

}  // namespace bvm
