#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bvm {

/// Hereditarily finite set. Members are kept sorted and unique under the
/// structural order, so equality is plain member-wise comparison.
class HFSet {
 public:
  HFSet() = default;
  explicit HFSet(std::vector<HFSet> members);

  static HFSet empty() { return {}; }
  static HFSet singleton(HFSet x);
  static HFSet pair_set(HFSet x, HFSet y);
  /// Kuratowski pair {{x},{x,y}}.
  static HFSet kpair(const HFSet& x, const HFSet& y);
  /// Von Neumann natural k.
  static HFSet ordinal(int k);
  /// Parses `{}`, `{{},{{}}}` and so on.
  static HFSet parse(std::string_view text);

  const std::vector<HFSet>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool is_empty() const noexcept { return members_.empty(); }
  bool contains(const HFSet& x) const;
  bool subset_of(const HFSet& other) const;
  int rank() const noexcept { return rank_; }
  /// Returns k when this is the von Neumann natural k, else -1.
  int as_ordinal() const;

  std::string to_string() const;

  friend bool operator==(const HFSet& a, const HFSet& b);
  friend std::strong_ordering operator<=>(const HFSet& a, const HFSet& b);

 private:
  std::vector<HFSet> members_;
  int rank_ = 0;
};

/// V_r: all hereditarily finite sets of rank below r, in structural order.
/// Throws CapExceeded when |V_r| would exceed `cap`.
std::vector<HFSet> cumulative_level(int r, std::size_t cap = 1U << 16);

struct HFSetHash {
  std::size_t operator()(const HFSet& x) const noexcept;
};

}  // namespace bvm
