#include "bvm/posets.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace bvm {

namespace {

std::size_t idx(int p) { return static_cast<std::size_t>(p); }

}  // namespace

FinPoset::FinPoset(std::vector<std::string> labels, const std::vector<std::vector<bool>>& leq)
    : labels_(std::move(labels)) {
  const int n = size();
  if (n == 0) throw Error(Errc::BadSpec, "a poset needs a bottom element");
  if (leq.size() != idx(n)) throw Error(Errc::LengthMismatch, "order matrix does not match the elements");
  for (const auto& row : leq)
    if (row.size() != idx(n)) throw Error(Errc::LengthMismatch, "order matrix does not match the elements");
  for (int p = 0; p < n; ++p) {
    if (!leq[idx(p)][idx(p)]) throw Error(Errc::BadSpec, "order is not reflexive at " + label(p));
    for (int q = 0; q < n; ++q) {
      if (p != q && leq[idx(p)][idx(q)] && leq[idx(q)][idx(p)])
        throw Error(Errc::BadSpec, "order is not antisymmetric at " + label(p) + ", " + label(q));
      for (int r = 0; r < n; ++r)
        if (leq[idx(p)][idx(q)] && leq[idx(q)][idx(r)] && !leq[idx(p)][idx(r)])
          throw Error(Errc::BadSpec, "order is not transitive at " + label(p) + ", " + label(q) + ", " + label(r));
    }
  }
  bottom_ = -1;
  for (int p = 0; p < n && bottom_ < 0; ++p) {
    bool least = true;
    for (int q = 0; q < n && least; ++q) least = leq[idx(p)][idx(q)];
    if (least) bottom_ = p;
  }
  if (bottom_ < 0) throw Error(Errc::BadSpec, "poset has no least element");

  down_.assign(idx(n), Bits(idx(n)));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (leq[idx(p)][idx(q)]) down_[idx(q)].set(idx(p));
  Bits only_bottom = single(bottom_);
  disj_.assign(idx(n), Bits(idx(n)));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if ((down_[idx(p)] & down_[idx(q)]) == only_bottom) disj_[idx(p)].set(idx(q));
}

FinPoset FinPoset::from_pairs(std::vector<std::string> labels, const std::vector<std::pair<int, int>>& below) {
  const std::size_t n = labels.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t p = 0; p < n; ++p) leq[p][p] = true;
  for (auto [a, b] : below) {
    if (a < 0 || b < 0 || idx(a) >= n || idx(b) >= n) throw Error(Errc::BadSpec, "order pair outside the poset");
    leq[idx(a)][idx(b)] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k][j]) leq[i][j] = true;
  return FinPoset(std::move(labels), leq);
}

FinPoset FinPoset::chain(int k) {
  if (k < 1) throw Error(Errc::BadSpec, "a chain needs at least its bottom");
  std::vector<std::string> labels{"0"};
  std::vector<std::pair<int, int>> below;
  for (int i = 1; i < k; ++i) {
    labels.push_back("x" + std::to_string(i));
    below.emplace_back(i - 1, i);
  }
  return from_pairs(std::move(labels), below);
}

FinPoset FinPoset::antichain(int k) {
  if (k < 0) throw Error(Errc::BadSpec, "negative antichain size");
  std::vector<std::string> labels{"0"};
  std::vector<std::pair<int, int>> below;
  for (int i = 1; i <= k; ++i) {
    labels.push_back("x" + std::to_string(i));
    below.emplace_back(0, i);
  }
  return from_pairs(std::move(labels), below);
}

FinPoset FinPoset::boolean(int atoms) {
  if (atoms < 1 || atoms > 10) throw Error(Errc::SizeOverflow, "boolean poset needs 1 to 10 atoms");
  const BoolAlg alg(atoms);
  const std::size_t n = std::size_t{1} << atoms;
  std::vector<std::string> labels;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t a = 0; a < n; ++a) {
    labels.push_back(a == 0 ? "0" : alg.format(alg.elem(a)));
    for (std::size_t b = 0; b < n; ++b) leq[a][b] = (a & ~b) == 0;
  }
  return FinPoset(std::move(labels), leq);
}

std::optional<int> FinPoset::find(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

Bits FinPoset::single(int p) const {
  Bits b = empty_set();
  b.set(idx(p));
  return b;
}

std::vector<int> FinPoset::members(const Bits& s) const {
  std::vector<int> out;
  for (auto i = s.find_first(); i != Bits::npos; i = s.find_next(i)) out.push_back(static_cast<int>(i));
  return out;
}

std::string FinPoset::format(const Bits& s) const {
  std::string out = "{";
  bool first = true;
  for (int p : members(s)) {
    out += (first ? "" : ",") + label(p);
    first = false;
  }
  return out + "}";
}

Bits polar(const FinPoset& P, const Bits& A) {
  Bits out = P.whole();
  for (int p : P.members(A)) out &= P.perp(p);
  return out;
}

Bits principal_band(const FinPoset& P, int p) { return polar(P, P.perp(p)); }

Bits interval(const FinPoset& P, int p) { return P.down(p); }

std::optional<std::vector<Bits>> enumerate_bands(const FinPoset& P, std::size_t cap) {
  std::set<Bits> seen{P.whole()};
  std::vector<Bits> frontier{P.whole()};
  std::vector<Bits> gens;
  for (int p = 0; p < P.size(); ++p) gens.push_back(P.perp(p));
  while (!frontier.empty()) {
    std::vector<Bits> next;
    for (const Bits& b : frontier)
      for (const Bits& g : gens) {
        Bits c = b & g;
        if (seen.insert(c).second) {
          if (seen.size() > cap) return std::nullopt;
          next.push_back(std::move(c));
        }
      }
    frontier = std::move(next);
  }
  return std::vector<Bits>(seen.begin(), seen.end());
}

Elem Completion::band_of(const FinPoset& P, int p) const { return elem_of(principal_band(P, p)); }

Elem Completion::elem_of(const Bits& band) const {
  Mask m = 0;
  for (std::size_t i = 0; i < atom_bands.size(); ++i)
    if (atom_bands[i].is_subset_of(band)) m |= Mask{1} << i;
  return algebra.elem(m);
}

Bits Completion::band_for(const FinPoset& P, const Elem& e) const {
  Bits u = P.single(P.bottom());
  for (Mask m = e.bits; m != 0; m &= m - 1) u |= atom_bands[idx(std::countr_zero(m))];
  return polar(P, polar(P, u));
}

Completion completion(const FinPoset& P, std::size_t band_cap) {
  // Every nonzero band K holds some p != 0 and then [p] <= K, so the minimal
  // nonzero bands are the minimal nonzero principal bands.
  std::vector<Bits> principal;
  for (int p = 0; p < P.size(); ++p)
    if (p != P.bottom()) principal.push_back(principal_band(P, p));
  std::vector<Bits> atoms;
  for (const Bits& k : principal) {
    bool minimal = true;
    for (const Bits& other : principal)
      if (other != k && other.is_proper_subset_of(k)) minimal = false;
    if (minimal && std::find(atoms.begin(), atoms.end(), k) == atoms.end()) atoms.push_back(k);
  }
  std::sort(atoms.begin(), atoms.end(), [&](const Bits& a, const Bits& b) {
    return P.members(a) < P.members(b);
  });
  if (atoms.size() > static_cast<std::size_t>(kMaxAtoms))
    throw Error(Errc::CapExceeded, "band algebra has more than 64 atoms");

  std::vector<std::string> names;
  for (const Bits& a : atoms) {
    // Name each atom after the largest element generating it.
    int rep = -1;
    for (int p : P.members(a))
      if (p != P.bottom() && principal_band(P, p) == a && (rep < 0 || P.leq(rep, p))) rep = p;
    names.push_back("[" + (rep >= 0 ? P.label(rep) : P.format(a)) + "]");
  }
  // The one-point poset has the degenerate algebra 0 = 1, which has no atoms.
  if (atoms.empty()) throw Error(Errc::BadSpec, "the band algebra of a one-point poset is degenerate");
  Completion c{BoolAlg(static_cast<int>(atoms.size()), names), atoms, enumerate_bands(P, band_cap)};

  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if ((atoms[i] & atoms[j]) != P.single(P.bottom()))
        throw Error(Errc::NotBoolean, "atoms " + names[i] + " and " + names[j] + " overlap");
  for (int p = 0; p < P.size(); ++p) {
    const Bits band = principal_band(P, p);
    if (c.band_for(P, c.elem_of(band)) != band)
      throw Error(Errc::NotBoolean, "[" + P.label(p) + "] is not the join of the atoms under it");
  }
  if (c.bands) {
    const auto& bands = *c.bands;
    if (bands.size() != (std::size_t{1} << atoms.size()))
      throw Error(Errc::NotBoolean, std::to_string(bands.size()) + " bands over " + std::to_string(atoms.size()) + " atoms");
    std::set<Mask> images;
    for (const Bits& b : bands) {
      const Elem e = c.elem_of(b);
      if (!images.insert(e.bits).second || c.band_for(P, e) != b)
        throw Error(Errc::NotBoolean, "band " + P.format(b) + " is not determined by its atoms");
    }
  }
  return c;
}

std::string completion_dot(const FinPoset& P, const Completion& c) {
  std::ostringstream out;
  out << "digraph bands {\n  rankdir=BT;\n";
  std::vector<Bits> nodes = c.bands ? *c.bands : c.atom_bands;
  if (!c.bands) {
    nodes.push_back(P.single(P.bottom()));
    nodes.push_back(P.whole());
  }
  std::sort(nodes.begin(), nodes.end(), [](const Bits& a, const Bits& b) {
    return a.count() != b.count() ? a.count() < b.count() : a < b;
  });
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    out << "  b" << i << " [label=\"" << P.format(nodes[i]) << "\"];\n";
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j || !nodes[i].is_proper_subset_of(nodes[j])) continue;
      bool cover = true;
      for (std::size_t k = 0; k < nodes.size() && cover; ++k)
        if (k != i && k != j && nodes[i].is_proper_subset_of(nodes[k]) && nodes[k].is_proper_subset_of(nodes[j]))
          cover = false;
      if (cover) out << "  b" << i << " -> b" << j << ";\n";
    }
  out << "}\n";
  return out.str();
}

RefinedReport refinedness_conditions(const FinPoset& P) {
  RefinedReport r;
  const int n = P.size();
  const int zero = P.bottom();

  r.separation = true;
  for (int p = 0; p < n && r.separation; ++p)
    for (int q = 0; q < n && r.separation; ++q) {
      if (q == zero || P.leq(q, p)) continue;
      bool found = false;
      for (int s = 0; s < n && !found; ++s) found = s != zero && P.leq(s, q) && P.disjoint(p, s);
      if (!found) {
        r.separation = false;
        r.notes.push_back("(a) fails for p=" + P.label(p) + ", q=" + P.label(q));
      }
    }

  std::vector<Bits> bands;
  for (int p = 0; p < n; ++p) bands.push_back(principal_band(P, p));

  r.principal_is_interval = true;
  for (int p = 0; p < n && r.principal_is_interval; ++p)
    if (bands[idx(p)] != interval(P, p)) {
      r.principal_is_interval = false;
      r.notes.push_back("(b) fails at " + P.label(p) + ": [p]=" + P.format(bands[idx(p)]));
    }

  r.injective = true;
  for (int p = 0; p < n && r.injective; ++p)
    for (int q = p + 1; q < n && r.injective; ++q)
      if (bands[idx(p)] == bands[idx(q)]) {
        r.injective = false;
        r.notes.push_back("(c) fails: [" + P.label(p) + "] = [" + P.label(q) + "]");
      }

  bool embedding = true;
  for (int p = 0; p < n && embedding; ++p)
    for (int q = 0; q < n && embedding; ++q)
      if (P.leq(p, q) != bands[idx(p)].is_subset_of(bands[idx(q)])) {
        embedding = false;
        r.notes.push_back("(d) order not reflected at " + P.label(p) + ", " + P.label(q));
      }
  bool dense = true;
  if (auto all = enumerate_bands(P)) {
    for (const Bits& k : *all) {
      if (k == P.single(zero)) continue;
      bool hit = false;
      for (int p = 0; p < n && !hit; ++p) hit = p != zero && bands[idx(p)].is_subset_of(k);
      if (!hit) {
        dense = false;
        r.notes.push_back("(d) band " + P.format(k) + " holds no nonzero [p]");
        break;
      }
    }
  } else {
    r.notes.push_back("(d) density checked on atoms only: band lattice too large to list");
    for (int p = 0; p < n; ++p)
      if (p != zero && bands[idx(p)] == P.single(zero)) dense = false;
  }
  r.dense_embedding = embedding && dense;
  return r;
}

bool is_refined(const FinPoset& P) {
  const RefinedReport r = refinedness_conditions(P);
  if (!r.consistent()) {
    std::string msg = "refinedness conditions disagree";
    for (const auto& note : r.notes) msg += "; " + note;
    throw Error(Errc::InternalInconsistency, msg);
  }
  return r.separation;
}

std::size_t forcing_c_count(int n, int m, std::optional<int> kappa) {
  std::size_t total = 0;
  std::size_t binom = 1;
  std::size_t power = 1;
  for (int k = 0; k <= n; ++k) {
    if (kappa && k >= *kappa) break;
    total += binom * power;
    binom = binom * static_cast<std::size_t>(n - k) / static_cast<std::size_t>(k + 1);
    power *= static_cast<std::size_t>(m);
  }
  return total;
}

FinPoset forcing_c(int n, int m, std::optional<int> kappa, std::size_t cap) {
  if (n < 1 || m < 1 || m > 10) throw Error(Errc::BadSpec, "forcing poset needs n >= 1 and 1 <= m <= 10");
  if (kappa && *kappa < 1) throw Error(Errc::BadSpec, "kappa must be positive");
  if (forcing_c_count(n, m, kappa) + 1 > cap)
    throw Error(Errc::SizeOverflow, "C(" + std::to_string(n) + "," + std::to_string(m) + ") exceeds " + std::to_string(cap) + " elements");

  // Each point holds a value in [0, m) or m for undefined.
  std::vector<std::vector<int>> funcs;
  std::vector<int> f(static_cast<std::size_t>(n), 0);
  while (true) {
    const int dom = static_cast<int>(std::count_if(f.begin(), f.end(), [&](int v) { return v < m; }));
    if (!kappa || dom < *kappa) funcs.push_back(f);
    int i = 0;
    while (i < n && ++f[idx(i)] > m) f[idx(i++)] = 0;
    if (i == n) break;
  }
  std::stable_sort(funcs.begin(), funcs.end(), [&](const auto& a, const auto& b) {
    auto dom = [&](const auto& g) { return std::count_if(g.begin(), g.end(), [&](int v) { return v < m; }); };
    return dom(a) < dom(b);
  });

  std::vector<std::string> labels{"0"};
  for (const auto& g : funcs) {
    if (std::all_of(g.begin(), g.end(), [&](int v) { return v == m; })) {
      labels.push_back("e");
      continue;
    }
    std::string s = "f";
    for (int v : g) s += v == m ? '_' : static_cast<char>('0' + v);
    labels.push_back(s);
  }
  const std::size_t size = funcs.size() + 1;
  std::vector<std::vector<bool>> leq(size, std::vector<bool>(size, false));
  for (std::size_t j = 0; j < size; ++j) leq[0][j] = true;
  for (std::size_t a = 0; a < funcs.size(); ++a)
    for (std::size_t b = 0; b < funcs.size(); ++b) {
      // g <= f iff g extends f.
      bool extends = true;
      for (int i = 0; i < n && extends; ++i)
        if (funcs[b][idx(i)] != m && funcs[a][idx(i)] != funcs[b][idx(i)]) extends = false;
      leq[a + 1][b + 1] = extends;
    }
  return FinPoset(std::move(labels), leq);
}

}  // namespace bvm
