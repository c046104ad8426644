#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "bvm/balg.hpp"

namespace bvm {

using Bits = boost::dynamic_bitset<>;

/// A finite partial order with a least element.
class FinPoset {
 public:
  /// `leq[p][q]` means p <= q. Validates the order axioms and the bottom.
  FinPoset(std::vector<std::string> labels, const std::vector<std::vector<bool>>& leq);
  /// Order generated by the pairs (lower, upper); reflexive-transitive
  /// closure is taken. The bottom must already be below everything.
  static FinPoset from_pairs(std::vector<std::string> labels, const std::vector<std::pair<int, int>>& below);

  /// Bottom `0` under a chain x1 < ... < x(k-1); k points in all.
  static FinPoset chain(int k);
  /// Bottom `0` under k pairwise incomparable atoms.
  static FinPoset antichain(int k);
  /// Nonzero elements of the powerset algebra on n atoms, plus bottom.
  static FinPoset boolean(int atoms);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  int bottom() const noexcept { return bottom_; }
  const std::string& label(int p) const { return labels_.at(static_cast<std::size_t>(p)); }
  std::optional<int> find(std::string_view label) const;
  bool leq(int p, int q) const { return down_[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)]; }
  /// {r : r <= p}.
  const Bits& down(int p) const { return down_[static_cast<std::size_t>(p)]; }
  /// p and q have no common lower bound but the bottom.
  bool disjoint(int p, int q) const { return disj_[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]; }
  /// {q : q disjoint from p}.
  const Bits& perp(int p) const { return disj_[static_cast<std::size_t>(p)]; }

  Bits empty_set() const { return Bits(static_cast<std::size_t>(size())); }
  Bits whole() const { return ~empty_set(); }
  Bits single(int p) const;
  std::vector<int> members(const Bits& s) const;
  std::string format(const Bits& s) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Bits> down_;
  std::vector<Bits> disj_;
  int bottom_ = 0;
};

/// {q : q disjoint from every member of A}.
Bits polar(const FinPoset& P, const Bits& A);
/// [p], the double polar of {p}.
Bits principal_band(const FinPoset& P, int p);
/// The order interval {r : 0 <= r <= p}.
Bits interval(const FinPoset& P, int p);

/// All bands, as the closure of the polars {p}^perp under intersection.
/// Returns nothing when more than `cap` bands turn up.
std::optional<std::vector<Bits>> enumerate_bands(const FinPoset& P, std::size_t cap = 1U << 14);

/// The band algebra, presented as the powerset of its atoms (the minimal
/// nonzero bands, all of which are principal).
struct Completion {
  BoolAlg algebra;
  std::vector<Bits> atom_bands;
  /// Every band, when the lattice was small enough to list.
  std::optional<std::vector<Bits>> bands;

  /// Atom set of [p].
  Elem band_of(const FinPoset& P, int p) const;
  /// Atom set lying under a band.
  Elem elem_of(const Bits& band) const;
  /// The band joining the atoms of e: the double polar of their union.
  Bits band_for(const FinPoset& P, const Elem& e) const;
};

/// Throws NotBoolean if bands and atom sets fail to correspond, and
/// CapExceeded beyond 64 atoms.
Completion completion(const FinPoset& P, std::size_t band_cap = 1U << 14);

/// Graphviz Hasse diagram of the band lattice (atoms only when the full
/// lattice was not listed).
std::string completion_dot(const FinPoset& P, const Completion& c);

struct RefinedReport {
  bool separation = false;      // (a)
  bool principal_is_interval = false;  // (b)
  bool injective = false;       // (c)
  bool dense_embedding = false; // (d)
  bool consistent() const {
    return separation == principal_is_interval && separation == injective && separation == dense_embedding;
  }
  std::vector<std::string> notes;
};

/// The four refinedness conditions, each computed independently.
RefinedReport refinedness_conditions(const FinPoset& P);
/// The common value of the four conditions; throws InternalInconsistency when
/// they disagree.
bool is_refined(const FinPoset& P);

/// Partial functions from an n-set to an m-set with fewer than `kappa`
/// points in the domain, ordered by reverse inclusion, with a bottom `0`.
/// The empty function is `e`; others are `f` followed by one symbol per
/// point of the n-set, the value or `_` where undefined.
FinPoset forcing_c(int n, int m, std::optional<int> kappa = std::nullopt, std::size_t cap = 4096);
/// sum over k < kappa of C(n, k) m^k.
std::size_t forcing_c_count(int n, int m, std::optional<int> kappa = std::nullopt);

}  // namespace bvm
