#include "bvm/hf.hpp"

#include <algorithm>
#include <cctype>

#include "bvm/error.hpp"

namespace bvm {

HFSet::HFSet(std::vector<HFSet> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (const auto& m : members_) rank_ = std::max(rank_, m.rank_ + 1);
}

HFSet HFSet::singleton(HFSet x) { return HFSet(std::vector<HFSet>{std::move(x)}); }

HFSet HFSet::pair_set(HFSet x, HFSet y) { return HFSet(std::vector<HFSet>{std::move(x), std::move(y)}); }

HFSet HFSet::kpair(const HFSet& x, const HFSet& y) { return pair_set(singleton(x), pair_set(x, y)); }

HFSet HFSet::ordinal(int k) {
  std::vector<HFSet> members;
  members.reserve(static_cast<std::size_t>(std::max(k, 0)));
  for (int i = 0; i < k; ++i) members.push_back(HFSet(members));
  return HFSet(std::move(members));
}

namespace {

struct HFParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::SyntaxError, "hereditarily finite literal, column " + std::to_string(pos + 1) + ": " + msg);
  }
  HFSet parse_set() {
    skip();
    if (pos >= text.size() || text[pos] != '{') fail("expected '{'");
    ++pos;
    std::vector<HFSet> members;
    skip();
    if (pos < text.size() && text[pos] == '}') {
      ++pos;
      return {};
    }
    for (;;) {
      members.push_back(parse_set());
      skip();
      if (pos >= text.size()) fail("unterminated set");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == '}') {
        ++pos;
        break;
      }
      fail("expected ',' or '}'");
    }
    return HFSet(std::move(members));
  }
};

}  // namespace

HFSet HFSet::parse(std::string_view text) {
  HFParser p{text};
  HFSet out = p.parse_set();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return out;
}

bool HFSet::contains(const HFSet& x) const { return std::binary_search(members_.begin(), members_.end(), x); }

bool HFSet::subset_of(const HFSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

int HFSet::as_ordinal() const {
  const int k = static_cast<int>(members_.size());
  return *this == ordinal(k) ? k : -1;
}

std::string HFSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i != 0) out += ',';
    out += members_[i].to_string();
  }
  return out + "}";
}

bool operator==(const HFSet& a, const HFSet& b) { return a.rank_ == b.rank_ && a.members_ == b.members_; }

std::strong_ordering operator<=>(const HFSet& a, const HFSet& b) {
  // Rank first keeps small sets at the front of every enumeration.
  if (auto c = a.rank() <=> b.rank(); c != 0) return c;
  if (auto c = a.members_.size() <=> b.members_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.members_.size(); ++i)
    if (auto c = a.members_[i] <=> b.members_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::vector<HFSet> cumulative_level(int r, std::size_t cap) {
  std::vector<HFSet> level;  // V_0 is empty
  for (int k = 0; k < r; ++k) {
    if (level.size() >= 64 || (std::size_t{1} << level.size()) > cap)
      throw Error(Errc::CapExceeded, "V_" + std::to_string(k + 1) + " exceeds the cap of " + std::to_string(cap));
    std::vector<HFSet> next;
    const std::size_t count = std::size_t{1} << level.size();
    next.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
      std::vector<HFSet> members;
      for (std::size_t i = 0; i < level.size(); ++i)
        if ((mask >> i) & 1U) members.push_back(level[i]);
      next.push_back(HFSet(std::move(members)));
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  return level;
}

std::size_t HFSetHash::operator()(const HFSet& x) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL ^ x.size();
  for (const auto& m : x.members()) h = (h ^ (*this)(m)) * 0x100000001b3ULL;
  return h;
}

}  // namespace bvm
