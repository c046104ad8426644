#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bvm/balg.hpp"
#include "bvm/hf.hpp"

namespace bvm {

/// Interned handle of a Boolean-valued set inside one Universe.
using SetId = std::uint32_t;

struct Entry {
  SetId child;
  Mask value;
  friend bool operator==(const Entry&, const Entry&) = default;
};

/// A bounded-rank slice of the Boolean-valued universe over one finite
/// algebra. Sets are hash-consed: a set is a finite function from earlier
/// sets to the algebra, so construction order makes the membership graph
/// acyclic. Truth values of `x = y` and `x in y` are memoized.
///
/// Construction mutates the arena and needs a single owner. The truth
/// caches are guarded so that const evaluation may run concurrently.
class Universe {
 public:
  explicit Universe(BoolAlg alg);

  Universe(const Universe&) = delete;
  Universe& operator=(const Universe&) = delete;

  const BoolAlg& algebra() const noexcept { return alg_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  SetId empty_set() const noexcept { return 0; }

  /// Builds the function {child -> value}. Repeated children are joined.
  SetId make(std::span<const std::pair<SetId, Elem>> entries);
  SetId make_bits(std::vector<Entry> entries);

  std::span<const Entry> entries(SetId x) const { return node(x).entries; }
  int rank(SetId x) const { return node(x).rank; }
  /// x(child), or zero when child is outside dom(x).
  Elem value_at(SetId x, SetId child) const;
  Elem elem(Mask bits) const noexcept { return {alg_.id(), bits, alg_.full_mask()}; }

  Elem truth_eq(SetId x, SetId y) const { return elem(eq_bits(x, y)); }
  Elem truth_mem(SetId x, SetId y) const { return elem(mem_bits(x, y)); }
  Mask eq_bits(SetId x, SetId y) const;
  Mask mem_bits(SetId x, SetId y) const;

  /// Standard name: every member named with value one.
  SetId name(const HFSet& h);

  /// Recursively normalizes children, drops zero entries and merges children
  /// that are equal with value one. Idempotent; truth-equal to the input.
  SetId normalize(SetId x);
  /// Fiber normal form: the entries are standard names of the sets met in the
  /// atom collapses, each weighted by the atoms where it is a member. Two sets
  /// are truth-equal exactly when their canonical forms coincide.
  SetId canonicalize(SetId x);

  /// t -> b & x(t) on dom(x).
  SetId scale(const Elem& b, SetId x);
  /// t -> join_k parts[k] & xs[k](t) over the union of domains.
  SetId mix(std::span<const Elem> parts, std::span<const SetId> xs);
  /// Ascent of a family: every member with value one. Ascent of nothing is
  /// the empty set.
  SetId ascent(std::span<const SetId> xs);
  /// Internal Kuratowski pair {{x},{x,y}}.
  SetId pair(SetId x, SetId y);
  /// Left fold of pairs: (x1,...,xn) = ((x1,...,x(n-1)),xn); one element is itself.
  SetId tuple(std::span<const SetId> xs);

  /// Classical set seen at the principal ultrafilter of `atom`.
  HFSet collapse(int atom, SetId x) const;
  /// Transport along a complete homomorphism into `target`.
  SetId pi_star(const Hom& pi, SetId x, Universe& target) const;

  /// Total structural order on sets (rank, size, entries).
  int structural_compare(SetId a, SetId b) const;

  std::string describe(SetId x) const;

 private:
  struct Node {
    std::vector<Entry> entries;  // sorted by child id, no duplicates
    int rank = 0;
  };
  struct EntriesHash {
    std::size_t operator()(const std::vector<Entry>& es) const noexcept;
  };

  const Node& node(SetId x) const;
  void check_elem(const Elem& e) const;

  BoolAlg alg_;
  std::vector<Node> nodes_;
  std::unordered_map<std::vector<Entry>, SetId, EntriesHash> intern_;
  std::unordered_map<HFSet, SetId, HFSetHash> names_;
  std::unordered_map<SetId, SetId> canonical_;

  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::uint64_t, Mask> eq_cache_;
  mutable std::unordered_map<std::uint64_t, Mask> mem_cache_;
  mutable std::unordered_map<std::uint64_t, HFSet> collapse_cache_;
};

/// A finite list of pairwise truth-distinct sets, indexed by canonical form.
class Fragment {
 public:
  Fragment() = default;
  /// Canonicalizes and deduplicates `members`, keeping first occurrences.
  Fragment(Universe& u, std::span<const SetId> members);

  const std::vector<SetId>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  SetId operator[](std::size_t i) const { return members_[i]; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  /// Index of the member truth-equal to x, if any.
  std::optional<std::size_t> find(Universe& u, SetId x) const;

 private:
  std::vector<SetId> members_;
  std::unordered_map<SetId, std::size_t> by_canonical_;
};

/// All sets of rank below max(rank_bound, 1), one per truth-equality class,
/// in canonical form. Each member is the mixing over atoms of standard names
/// of V_r; the order treats the atom-0 choice as the fastest digit. Throws
/// CapExceeded when |V_r|^atoms exceeds `cap`.
Fragment enumerate_universe(Universe& u, int rank_bound, std::size_t cap = 200000);

/// Every mixing of members of xs over atoms, canonicalized and deduplicated.
std::vector<SetId> mix_closure(Universe& u, std::span<const SetId> xs);

/// Scale-and-mix helper used by the ordinal, realization and two-point code:
/// the set that looks like names[k] exactly on the atoms choosing k.
SetId mix_by_atoms(Universe& u, std::span<const int> choice, std::span<const SetId> names);

}  // namespace bvm
