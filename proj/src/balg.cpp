#include "bvm/balg.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <numeric>

namespace bvm {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::AlgebraMismatch: return "AlgebraMismatch";
    case Errc::BadSpec: return "BadSpec";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotAutomorphism: return "NotAutomorphism";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownSymbol: return "UnknownSymbol";
    case Errc::ArityError: return "ArityError";
    case Errc::UnboundedQuantifier: return "UnboundedQuantifier";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::NotRestricted: return "NotRestricted";
    case Errc::EmptyFragment: return "EmptyFragment";
    case Errc::NotExtensional: return "NotExtensional";
    case Errc::NotAFunction: return "NotAFunction";
    case Errc::RankInsufficient: return "RankInsufficient";
    case Errc::MetricAxiomViolation: return "MetricAxiomViolation";
    case Errc::MemNotInSignature: return "MemNotInSignature";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::NotBoolean: return "NotBoolean";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::SizeOverflow: return "SizeOverflow";
    case Errc::ScriptError: return "ScriptError";
  }
  return "Unknown";
}

namespace {

std::uint32_t next_algebra_id() {
  static std::atomic<std::uint32_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

BoolAlg::BoolAlg(int atom_count, std::vector<std::string> atom_names)
    : id_(next_algebra_id()), atoms_(atom_count), names_(std::move(atom_names)) {
  if (atom_count < 1 || atom_count > kMaxAtoms)
    throw Error(Errc::BadSpec, "atom count must lie in [1, 64], got " + std::to_string(atom_count));
  full_ = atom_count == 64 ? ~Mask{0} : (Mask{1} << atom_count) - 1;
  if (names_.empty()) {
    for (int i = 0; i < atom_count; ++i) names_.push_back("a" + std::to_string(i + 1));
  } else if (static_cast<int>(names_.size()) != atom_count) {
    throw Error(Errc::BadSpec, "atom name list does not match atom count");
  }
}

Elem BoolAlg::atom(int i) const {
  if (i < 0 || i >= atoms_) throw Error(Errc::BadSpec, "no atom with index " + std::to_string(i));
  return {id_, Mask{1} << i, full_};
}

Elem BoolAlg::elem(Mask bits) const {
  if ((bits & ~full_) != 0) throw Error(Errc::BadSpec, "mask names atoms outside the algebra");
  return {id_, bits, full_};
}

std::optional<int> BoolAlg::find_atom(std::string_view name) const {
  for (int i = 0; i < atoms_; ++i)
    if (names_[static_cast<std::size_t>(i)] == name) return i;
  return std::nullopt;
}

std::vector<Elem> BoolAlg::elements() const {
  if (atoms_ > 24) throw Error(Errc::SizeOverflow, "refusing to list 2^" + std::to_string(atoms_) + " elements");
  std::vector<Elem> out;
  out.reserve(size());
  for (Mask m = 0; m <= full_; ++m) out.push_back({id_, m, full_});
  return out;
}

std::vector<int> BoolAlg::atoms_of(const Elem& e) const {
  std::vector<int> out;
  for (Mask m = e.bits; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

Elem BoolAlg::parse(std::string_view text) const {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "0") return zero();
  if (text == "1") return one();
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw Error(Errc::SyntaxError, "bad element literal '" + std::string(text) + "'");
  text = trim(text.substr(1, text.size() - 2));
  Mask bits = 0;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto name = trim(text.substr(0, comma));
    auto idx = find_atom(name);
    if (!idx) throw Error(Errc::UnknownSymbol, "no atom named '" + std::string(name) + "'");
    bits |= Mask{1} << *idx;
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return {id_, bits, full_};
}

std::string BoolAlg::format(const Elem& e) const {
  if (e.bits == 0) return "0";
  if (e.bits == full_) return "1";
  std::string out = "{";
  bool first = true;
  for (int i : atoms_of(e)) {
    if (!first) out += ',';
    out += atom_name(i);
    first = false;
  }
  return out + "}";
}

void require_same(const Elem& a, const Elem& b) {
  if (a.alg != b.alg)
    throw Error(Errc::AlgebraMismatch,
                "elements of algebras " + std::to_string(a.alg) + " and " + std::to_string(b.alg));
}

Elem aggregate(const BoolAlg& alg, std::span<const Elem> xs, Aggregate kind) {
  Elem acc = kind == Aggregate::Meet ? alg.one() : alg.zero();
  for (const Elem& x : xs) {
    if (!alg.owns(x)) throw Error(Errc::AlgebraMismatch, "aggregate over a foreign element");
    acc = kind == Aggregate::Meet ? meet(acc, x) : join(acc, x);
  }
  return acc;
}

bool is_partition(const BoolAlg& alg, std::span<const Elem> xs) {
  Mask seen = 0;
  bool disjoint = true;
  for (const Elem& x : xs) {
    if (!alg.owns(x)) throw Error(Errc::AlgebraMismatch, "partition block from a foreign algebra");
    if ((seen & x.bits) != 0) disjoint = false;
    seen |= x.bits;
  }
  return disjoint && seen == alg.full_mask();
}

Hom Hom::permutation(const BoolAlg& alg, std::span<const int> perm) {
  const int n = alg.atom_count();
  if (static_cast<int>(perm.size()) != n) throw Error(Errc::BadSpec, "permutation length differs from atom count");
  std::vector<int> inverse(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int j = perm[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || inverse[static_cast<std::size_t>(j)] != -1)
      throw Error(Errc::BadSpec, "atom map is not a bijection");
    inverse[static_cast<std::size_t>(j)] = i;
  }
  // Atom i moves to perm[i], so target atom j pulls back to inverse[j].
  return Hom(alg.id(), alg.id(), alg.full_mask(), std::move(inverse), true);
}

Hom Hom::projection(const BoolAlg& source, const BoolAlg& two_point, int atom) {
  if (two_point.atom_count() != 1) throw Error(Errc::BadSpec, "projection target must be the two-point algebra");
  if (atom < 0 || atom >= source.atom_count()) throw Error(Errc::BadSpec, "projection names a missing atom");
  return Hom(source.id(), two_point.id(), two_point.full_mask(), {atom}, false);
}

Hom Hom::from_atom_map(const BoolAlg& source, const BoolAlg& target, std::vector<int> pullback) {
  if (static_cast<int>(pullback.size()) != target.atom_count())
    throw Error(Errc::BadSpec, "atom map must cover every target atom");
  Mask hit = 0;
  for (int a : pullback) {
    if (a < 0 || a >= source.atom_count()) throw Error(Errc::BadSpec, "atom map names a missing source atom");
    hit |= Mask{1} << a;
  }
  // Any atom-to-atom pullback gives a complete homomorphism; it is injective
  // exactly when every source atom is hit.
  bool automorphism = source.id() == target.id() && hit == source.full_mask() &&
                      std::popcount(hit) == target.atom_count();
  return Hom(source.id(), target.id(), target.full_mask(), std::move(pullback), automorphism);
}

Mask Hom::apply_bits(Mask b) const noexcept {
  Mask out = 0;
  for (std::size_t q = 0; q < pullback_.size(); ++q)
    if ((b >> pullback_[q]) & 1U) out |= Mask{1} << q;
  return out;
}

Elem Hom::operator()(const Elem& b) const {
  if (b.alg != source_) throw Error(Errc::AlgebraMismatch, "homomorphism applied outside its source");
  return {target_, apply_bits(b.bits), target_full_};
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace bvm
