#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bvm/error.hpp"

namespace bvm {

using Mask = std::uint64_t;

inline constexpr int kMaxAtoms = 64;

/// Element of a finite complete Boolean algebra, stored as the set of atoms
/// lying under it. `full` is the unity of the owning algebra; carrying it
/// lets complement work without a back pointer.
struct Elem {
  std::uint32_t alg = 0;
  Mask bits = 0;
  Mask full = 0;

  bool is_zero() const noexcept { return bits == 0; }
  bool is_one() const noexcept { return bits == full; }
  friend bool operator==(const Elem&, const Elem&) = default;
};

/// The powerset algebra on `atom_count` atoms. Every finite complete Boolean
/// algebra is isomorphic to one of these.
class BoolAlg {
 public:
  explicit BoolAlg(int atom_count, std::vector<std::string> atom_names = {});

  std::uint32_t id() const noexcept { return id_; }
  int atom_count() const noexcept { return atoms_; }
  Mask full_mask() const noexcept { return full_; }
  /// 2^n; only meaningful while n < 64.
  std::uint64_t size() const noexcept { return Mask{1} << atoms_; }

  Elem zero() const noexcept { return {id_, 0, full_}; }
  Elem one() const noexcept { return {id_, full_, full_}; }
  Elem atom(int i) const;
  Elem elem(Mask bits) const;
  bool owns(const Elem& e) const noexcept { return e.alg == id_; }

  const std::string& atom_name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  std::optional<int> find_atom(std::string_view name) const;

  /// All 2^n elements in increasing bit order; refuses n > 24.
  std::vector<Elem> elements() const;
  /// Atoms of `e`, lowest index first.
  std::vector<int> atoms_of(const Elem& e) const;

  /// Literal forms `0`, `1`, `{a1,a3}`.
  Elem parse(std::string_view text) const;
  std::string format(const Elem& e) const;

 private:
  std::uint32_t id_;
  int atoms_;
  Mask full_;
  std::vector<std::string> names_;
};

void require_same(const Elem& a, const Elem& b);

inline Elem meet(const Elem& a, const Elem& b) {
  require_same(a, b);
  return {a.alg, a.bits & b.bits, a.full};
}
inline Elem join(const Elem& a, const Elem& b) {
  require_same(a, b);
  return {a.alg, a.bits | b.bits, a.full};
}
inline Elem complement(const Elem& a) noexcept { return {a.alg, a.full & ~a.bits, a.full}; }
inline Elem imp(const Elem& a, const Elem& b) {
  require_same(a, b);
  return {a.alg, (a.full & ~a.bits) | b.bits, a.full};
}
inline Elem symm_diff(const Elem& a, const Elem& b) {
  require_same(a, b);
  return {a.alg, a.bits ^ b.bits, a.full};
}
inline bool leq(const Elem& a, const Elem& b) {
  require_same(a, b);
  return (a.bits & b.bits) == a.bits;
}

inline Elem operator&(const Elem& a, const Elem& b) { return meet(a, b); }
inline Elem operator|(const Elem& a, const Elem& b) { return join(a, b); }
inline Elem operator~(const Elem& a) noexcept { return complement(a); }
inline Elem operator^(const Elem& a, const Elem& b) { return symm_diff(a, b); }

enum class Aggregate { Meet, Join };

/// Big meet or join. An empty meet is unity and an empty join is zero, so
/// the algebra has to be passed explicitly.
Elem aggregate(const BoolAlg& alg, std::span<const Elem> xs, Aggregate kind);

/// Pairwise disjoint with join one. Zero blocks are allowed.
bool is_partition(const BoolAlg& alg, std::span<const Elem> xs);

/// A complete homomorphism between finite algebras, given by the source atom
/// that each target atom pulls back to: target atom q lies under h(b) iff
/// the pulled-back atom lies under b.
class Hom {
 public:
  static Hom permutation(const BoolAlg& alg, std::span<const int> perm);
  static Hom projection(const BoolAlg& source, const BoolAlg& two_point, int atom);
  static Hom from_atom_map(const BoolAlg& source, const BoolAlg& target, std::vector<int> pullback);

  std::uint32_t source_id() const noexcept { return source_; }
  std::uint32_t target_id() const noexcept { return target_; }
  bool is_automorphism() const noexcept { return automorphism_; }
  std::span<const int> pullback() const noexcept { return pullback_; }

  Elem operator()(const Elem& b) const;
  Mask apply_bits(Mask b) const noexcept;

 private:
  Hom(std::uint32_t source, std::uint32_t target, Mask target_full, std::vector<int> pullback, bool automorphism)
      : source_(source), target_(target), target_full_(target_full), pullback_(std::move(pullback)),
        automorphism_(automorphism) {}

  std::uint32_t source_;
  std::uint32_t target_;
  Mask target_full_;
  std::vector<int> pullback_;
  bool automorphism_;
};

/// Every permutation of {0..n-1} in lexicographic order; these are exactly the
/// automorphisms of the powerset algebra.
std::vector<std::vector<int>> all_permutations(int n);

}  // namespace bvm
