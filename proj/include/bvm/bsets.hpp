#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvm/balg.hpp"
#include "bvm/formula.hpp"
#include "bvm/universe.hpp"

namespace bvm {

/// A finite carrier with a B-valued metric, stored as a row-major matrix.
class BSet {
 public:
  /// Validates identity, symmetry and the triangle law; throws
  /// MetricAxiomViolation naming the axiom and the offending points.
  BSet(BoolAlg alg, std::vector<std::string> labels, std::vector<Mask> metric);

  /// d(x, y) = 1 off the diagonal.
  static BSet discrete(const BoolAlg& alg, int points);
  /// The algebra itself under symmetric difference; label c<i> is the
  /// element with mask i.
  static BSet symmdiff(const BoolAlg& alg);
  /// A set of Boolean-valued sets under d(x, y) = [[x != y]]. Members must be
  /// pairwise truth-distinct.
  static BSet from_universe(const Universe& u, std::span<const SetId> xs);

  const BoolAlg& algebra() const noexcept { return alg_; }
  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<int> find(std::string_view label) const;

  Mask d_bits(int x, int y) const { return metric_[static_cast<std::size_t>(x * size() + y)]; }
  Elem d(int x, int y) const { return alg_.elem(d_bits(x, y)); }

 private:
  BoolAlg alg_;
  std::vector<std::string> labels_;
  std::vector<Mask> metric_;
};

/// The unique x with b_k & d(x, xs[k]) = 0 for all k, if it exists.
std::optional<int> mix_in_bset(const BSet& X, std::span<const Elem> parts, std::span<const int> xs);
/// All mixings of members of A, over every way of assigning atoms to members.
std::vector<int> mix_set(const BSet& X, std::span<const int> A);
/// Least cyclic superset of A.
std::vector<int> cyc(const BSet& X, std::span<const int> A);
bool is_universally_complete(const BSet& X);

/// Tuples of carrier indices are encoded little-endian in base |A|.
std::size_t tuple_count(int carrier, int arity);
std::vector<int> decode_tuple(std::size_t code, int carrier, int arity);

/// d'(f(x), f(y)) <= d(x, y).
bool is_contractive_map(const BSet& X, const BSet& Y, std::span<const int> f);
/// d(f(a), f(a')) <= join_k d(a_k, a'_k).
bool is_contractive_op(const BSet& X, int arity, std::span<const int> table);
/// p(a) symmdiff p(a') <= join_k d(a_k, a'_k).
bool is_contractive_pred(const BSet& X, int arity, std::span<const Mask> table);

/// A B-set with contractive operation and predicate tables. 0-ary entries
/// are tables with one cell.
struct BSystem {
  BSet base;
  Signature sig;
  std::map<std::string, std::vector<int>> ops;
  std::map<std::string, std::vector<Mask>> preds;

  /// Checks arities, table sizes and contractivity.
  static BSystem make(BSet base, Signature sig, std::map<std::string, std::vector<int>> ops,
                      std::map<std::string, std::vector<Mask>> preds);
};

/// Boolean truth value |f|. Equality is the complement of the metric,
/// quantifiers range over the carrier, and a name with no binding denotes
/// the carrier point with that label. Membership is rejected.
Elem eval_bsystem(const BSystem& S, const Formula& f, const std::map<std::string, int>& a = {});

struct HomReport {
  bool hom = false;
  bool strong = false;
  bool iso = false;
};

/// Classifies h : |S1| -> |S2|. Throws SignatureMismatch.
HomReport check_homomorphism(std::span<const int> h, const BSystem& S1, const BSystem& S2);

struct Realization {
  /// Per atom, the class index of each point under x ~ y iff the atom is
  /// outside d(x, y).
  std::vector<std::vector<int>> classes;
  std::vector<SetId> iota;
  /// Every iota image with value one.
  SetId realized = 0;
};

/// iota(x) is the mixing over atoms of the standard names of x's class
/// indices, so d(x, y) = [[iota(x) != iota(y)]]. Throws RankInsufficient when
/// `rank_bound` cannot hold the class codes.
Realization realize_bset(Universe& u, const BSet& X, std::optional<int> rank_bound = std::nullopt);

}  // namespace bvm
