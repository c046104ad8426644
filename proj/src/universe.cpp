#include "bvm/universe.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace bvm {

namespace {

std::uint64_t ordered_key(SetId a, SetId b) { return (std::uint64_t{a} << 32) | b; }
std::uint64_t unordered_key(SetId a, SetId b) { return a < b ? ordered_key(a, b) : ordered_key(b, a); }

}  // namespace

std::size_t Universe::EntriesHash::operator()(const std::vector<Entry>& es) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const Entry& e : es) {
    h = (h ^ e.child) * 0x100000001b3ULL;
    h = (h ^ static_cast<std::size_t>(e.value)) * 0x100000001b3ULL;
  }
  return h;
}

Universe::Universe(BoolAlg alg) : alg_(std::move(alg)) {
  nodes_.push_back(Node{});
  intern_.emplace(std::vector<Entry>{}, 0);
}

const Universe::Node& Universe::node(SetId x) const {
  if (x >= nodes_.size()) throw Error(Errc::BadSpec, "unknown set id #" + std::to_string(x));
  return nodes_[x];
}

void Universe::check_elem(const Elem& e) const {
  if (!alg_.owns(e)) throw Error(Errc::AlgebraMismatch, "element does not belong to the universe's algebra");
}

SetId Universe::make(std::span<const std::pair<SetId, Elem>> entries) {
  std::vector<Entry> raw;
  raw.reserve(entries.size());
  for (const auto& [child, value] : entries) {
    check_elem(value);
    raw.push_back({child, value.bits});
  }
  return make_bits(std::move(raw));
}

SetId Universe::make_bits(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.child < b.child; });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const Entry& e : entries) {
    if (e.child >= nodes_.size()) throw Error(Errc::BadSpec, "unknown child id #" + std::to_string(e.child));
    if ((e.value & ~alg_.full_mask()) != 0) throw Error(Errc::AlgebraMismatch, "entry value outside the algebra");
    if (!merged.empty() && merged.back().child == e.child)
      merged.back().value |= e.value;
    else
      merged.push_back(e);
  }
  if (auto it = intern_.find(merged); it != intern_.end()) return it->second;
  Node n;
  for (const Entry& e : merged) n.rank = std::max(n.rank, nodes_[e.child].rank + 1);
  n.entries = merged;
  const auto id = static_cast<SetId>(nodes_.size());
  nodes_.push_back(std::move(n));
  intern_.emplace(std::move(merged), id);
  return id;
}

Elem Universe::value_at(SetId x, SetId child) const {
  const auto& es = node(x).entries;
  auto it = std::lower_bound(es.begin(), es.end(), child, [](const Entry& e, SetId c) { return e.child < c; });
  if (it != es.end() && it->child == child) return elem(it->value);
  return alg_.zero();
}

Mask Universe::eq_bits(SetId x, SetId y) const {
  if (x == y) return alg_.full_mask();
  const auto key = unordered_key(x, y);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = eq_cache_.find(key); it != eq_cache_.end()) return it->second;
  }
  const Mask full = alg_.full_mask();
  Mask acc = full;
  for (const Entry& e : node(x).entries) {
    acc &= (full & ~e.value) | mem_bits(e.child, y);
    if (acc == 0) break;
  }
  if (acc != 0) {
    for (const Entry& e : node(y).entries) {
      acc &= (full & ~e.value) | mem_bits(e.child, x);
      if (acc == 0) break;
    }
  }
  std::lock_guard lock(cache_mutex_);
  eq_cache_.emplace(key, acc);
  return acc;
}

Mask Universe::mem_bits(SetId x, SetId y) const {
  const auto key = ordered_key(x, y);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = mem_cache_.find(key); it != mem_cache_.end()) return it->second;
  }
  const Mask full = alg_.full_mask();
  Mask acc = 0;
  for (const Entry& e : node(y).entries) {
    if ((e.value & ~acc) == 0) continue;
    acc |= e.value & eq_bits(e.child, x);
    if (acc == full) break;
  }
  std::lock_guard lock(cache_mutex_);
  mem_cache_.emplace(key, acc);
  return acc;
}

SetId Universe::name(const HFSet& h) {
  if (auto it = names_.find(h); it != names_.end()) return it->second;
  std::vector<Entry> es;
  es.reserve(h.size());
  for (const auto& m : h.members()) es.push_back({name(m), alg_.full_mask()});
  SetId id = make_bits(std::move(es));
  names_.emplace(h, id);
  return id;
}

int Universe::structural_compare(SetId a, SetId b) const {
  if (a == b) return 0;
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.rank != nb.rank) return na.rank < nb.rank ? -1 : 1;
  if (na.entries.size() != nb.entries.size()) return na.entries.size() < nb.entries.size() ? -1 : 1;
  auto sorted = [this](const std::vector<Entry>& es) {
    std::vector<Entry> out = es;
    std::sort(out.begin(), out.end(), [this](const Entry& x, const Entry& y) {
      int c = structural_compare(x.child, y.child);
      return c != 0 ? c < 0 : x.value < y.value;
    });
    return out;
  };
  const auto ea = sorted(na.entries);
  const auto eb = sorted(nb.entries);
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (int c = structural_compare(ea[i].child, eb[i].child); c != 0) return c;
    if (ea[i].value != eb[i].value) return ea[i].value < eb[i].value ? -1 : 1;
  }
  return 0;
}

SetId Universe::normalize(SetId x) {
  std::vector<Entry> kids;
  for (const Entry& e : std::vector<Entry>(node(x).entries)) {
    if (e.value == 0) continue;
    kids.push_back({normalize(e.child), e.value});
  }
  // Group children that are equal with value one; equality at one is an
  // equivalence, so comparing against each group's first member suffices.
  std::vector<std::vector<Entry>> groups;
  for (const Entry& k : kids) {
    auto g = std::find_if(groups.begin(), groups.end(),
                          [&](const std::vector<Entry>& grp) { return eq_bits(grp.front().child, k.child) == alg_.full_mask(); });
    if (g == groups.end())
      groups.push_back({k});
    else
      g->push_back(k);
  }
  std::vector<Entry> out;
  for (const auto& grp : groups) {
    SetId rep = grp.front().child;
    Mask value = 0;
    for (const Entry& k : grp) {
      value |= k.value;
      if (structural_compare(k.child, rep) < 0) rep = k.child;
    }
    out.push_back({rep, value});
  }
  return make_bits(std::move(out));
}

SetId Universe::canonicalize(SetId x) {
  if (auto it = canonical_.find(x); it != canonical_.end()) return it->second;
  std::map<HFSet, Mask> weight;
  for (int q = 0; q < alg_.atom_count(); ++q) {
    const HFSet fiber = collapse(q, x);
    for (const auto& m : fiber.members()) weight[m] |= Mask{1} << q;
  }
  std::vector<Entry> es;
  es.reserve(weight.size());
  for (const auto& [m, w] : weight) es.push_back({name(m), w});
  SetId id = make_bits(std::move(es));
  canonical_.emplace(x, id);
  canonical_.emplace(id, id);
  return id;
}

SetId Universe::scale(const Elem& b, SetId x) {
  check_elem(b);
  std::vector<Entry> es(node(x).entries);
  for (Entry& e : es) e.value &= b.bits;
  return make_bits(std::move(es));
}

SetId Universe::mix(std::span<const Elem> parts, std::span<const SetId> xs) {
  if (parts.size() != xs.size())
    throw Error(Errc::LengthMismatch, std::to_string(parts.size()) + " blocks for " + std::to_string(xs.size()) + " sets");
  std::vector<Entry> es;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    check_elem(parts[k]);
    for (const Entry& e : node(xs[k]).entries) es.push_back({e.child, e.value & parts[k].bits});
  }
  return make_bits(std::move(es));
}

SetId Universe::ascent(std::span<const SetId> xs) {
  std::vector<Entry> es;
  es.reserve(xs.size());
  for (SetId x : xs) es.push_back({x, alg_.full_mask()});
  return make_bits(std::move(es));
}

SetId Universe::pair(SetId x, SetId y) {
  const SetId single[] = {x};
  const SetId both[] = {x, y};
  const SetId outer[] = {ascent(single), ascent(both)};
  return ascent(outer);
}

SetId Universe::tuple(std::span<const SetId> xs) {
  if (xs.empty()) throw Error(Errc::BadSpec, "empty tuple");
  SetId acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = pair(acc, xs[i]);
  return acc;
}

HFSet Universe::collapse(int atom, SetId x) const {
  if (atom < 0 || atom >= alg_.atom_count()) throw Error(Errc::BadSpec, "no atom with index " + std::to_string(atom));
  const auto key = ordered_key(static_cast<SetId>(atom), x);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = collapse_cache_.find(key); it != collapse_cache_.end()) return it->second;
  }
  std::vector<HFSet> members;
  for (const Entry& e : node(x).entries)
    if ((e.value >> atom) & 1U) members.push_back(collapse(atom, e.child));
  HFSet out(std::move(members));
  std::lock_guard lock(cache_mutex_);
  collapse_cache_.emplace(key, out);
  return out;
}

SetId Universe::pi_star(const Hom& pi, SetId x, Universe& target) const {
  if (pi.source_id() != alg_.id()) throw Error(Errc::AlgebraMismatch, "homomorphism source is not this universe's algebra");
  if (pi.target_id() != target.algebra().id()) throw Error(Errc::AlgebraMismatch, "homomorphism target mismatch");
  std::unordered_map<SetId, SetId> memo;
  auto go = [&](auto&& self, SetId s) -> SetId {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    // Copy first: target may be this universe, and growing it moves nodes.
    const std::vector<Entry> src = node(s).entries;
    std::vector<Entry> es;
    for (const Entry& e : src) es.push_back({self(self, e.child), pi.apply_bits(e.value)});
    // make_bits joins the values of children that land on the same image.
    SetId out = target.make_bits(std::move(es));
    memo.emplace(s, out);
    return out;
  };
  return go(go, x);
}

std::string Universe::describe(SetId x) const {
  std::string out = "{";
  bool first = true;
  for (const Entry& e : node(x).entries) {
    if (!first) out += ", ";
    out += "#" + std::to_string(e.child) + ":" + alg_.format(elem(e.value));
    first = false;
  }
  return out + "}";
}

Fragment::Fragment(Universe& u, std::span<const SetId> members) {
  for (SetId m : members) {
    SetId c = u.canonicalize(m);
    if (by_canonical_.emplace(c, members_.size()).second) members_.push_back(c);
  }
}

std::optional<std::size_t> Fragment::find(Universe& u, SetId x) const {
  auto it = by_canonical_.find(u.canonicalize(x));
  if (it == by_canonical_.end()) return std::nullopt;
  return it->second;
}

SetId mix_by_atoms(Universe& u, std::span<const int> choice, std::span<const SetId> names) {
  const BoolAlg& alg = u.algebra();
  if (static_cast<int>(choice.size()) != alg.atom_count()) throw Error(Errc::LengthMismatch, "one choice per atom required");
  std::vector<Mask> blocks(names.size(), 0);
  for (std::size_t q = 0; q < choice.size(); ++q) {
    const int k = choice[q];
    if (k < 0 || static_cast<std::size_t>(k) >= names.size()) throw Error(Errc::BadSpec, "atom choice out of range");
    blocks[static_cast<std::size_t>(k)] |= Mask{1} << q;
  }
  std::vector<Elem> parts;
  parts.reserve(blocks.size());
  for (Mask b : blocks) parts.push_back(u.elem(b));
  return u.mix(parts, names);
}

namespace {

// Calls f(choice) for every map atoms -> [0, k), atom 0 varying fastest.
template <class F>
void for_each_choice(int atoms, std::size_t k, F&& f) {
  if (k == 0) return;
  std::vector<int> choice(static_cast<std::size_t>(atoms), 0);
  for (;;) {
    f(std::span<const int>(choice));
    std::size_t q = 0;
    while (q < choice.size()) {
      if (static_cast<std::size_t>(++choice[q]) < k) break;
      choice[q] = 0;
      ++q;
    }
    if (q == choice.size()) return;
  }
}

std::size_t checked_power(std::size_t base, int exp, std::size_t cap) {
  std::size_t acc = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && acc > cap / base) return cap + 1;
    acc *= base;
  }
  return acc;
}

}  // namespace

Fragment enumerate_universe(Universe& u, int rank_bound, std::size_t cap) {
  if (rank_bound < 0) throw Error(Errc::BadSpec, "negative rank bound");
  const int r = std::max(rank_bound, 1);
  const auto level = cumulative_level(r, cap);
  const int atoms = u.algebra().atom_count();
  const std::size_t count = checked_power(level.size(), atoms, cap);
  if (count > cap)
    throw Error(Errc::CapExceeded, "rank " + std::to_string(r) + " fragment has at least " + std::to_string(count) +
                                       " members, cap is " + std::to_string(cap));
  std::vector<SetId> names;
  names.reserve(level.size());
  for (const auto& h : level) names.push_back(u.name(h));
  std::vector<SetId> members;
  members.reserve(count);
  for_each_choice(atoms, names.size(), [&](std::span<const int> choice) {
    members.push_back(u.canonicalize(mix_by_atoms(u, choice, names)));
  });
  return Fragment(u, members);
}

std::vector<SetId> mix_closure(Universe& u, std::span<const SetId> xs) {
  constexpr std::size_t kCap = 1U << 20;
  const int atoms = u.algebra().atom_count();
  if (checked_power(xs.size(), atoms, kCap) > kCap) throw Error(Errc::CapExceeded, "mix closure too large");
  std::vector<SetId> out;
  std::unordered_map<SetId, bool> seen;
  for_each_choice(atoms, xs.size(), [&](std::span<const int> choice) {
    SetId c = u.canonicalize(mix_by_atoms(u, choice, xs));
    if (seen.emplace(c, true).second) out.push_back(c);
  });
  return out;
}

}  // namespace bvm
