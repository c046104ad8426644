#include "bvm/bsets.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace bvm {

namespace {

std::string pts(const BSet& X, std::initializer_list<int> idx) {
  std::string out;
  for (int i : idx) out += (out.empty() ? "" : ", ") + X.label(i);
  return out;
}

// Calls fn(choice) for every map atoms -> [0, k).
template <class Fn>
void for_each_atom_choice(int atoms, int k, Fn&& fn) {
  std::vector<int> choice(static_cast<std::size_t>(atoms), 0);
  while (true) {
    fn(choice);
    int i = 0;
    while (i < atoms && ++choice[static_cast<std::size_t>(i)] == k) choice[static_cast<std::size_t>(i++)] = 0;
    if (i == atoms) return;
  }
}

}  // namespace

BSet::BSet(BoolAlg alg, std::vector<std::string> labels, std::vector<Mask> metric)
    : alg_(std::move(alg)), labels_(std::move(labels)), metric_(std::move(metric)) {
  const int n = size();
  if (n == 0) throw Error(Errc::BadSpec, "a B-set needs a nonempty carrier");
  if (metric_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw Error(Errc::LengthMismatch, "metric matrix does not match the carrier");
  for (Mask m : metric_)
    if ((m & ~alg_.full_mask()) != 0) throw Error(Errc::AlgebraMismatch, "metric value outside the algebra");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if ((d_bits(x, y) == 0) != (x == y))
        throw Error(Errc::MetricAxiomViolation, "axiom (a) fails at " + pts(*this, {x, y}));
      if (d_bits(x, y) != d_bits(y, x))
        throw Error(Errc::MetricAxiomViolation, "axiom (b) fails at " + pts(*this, {x, y}));
      for (int z = 0; z < n; ++z)
        if ((d_bits(x, y) & ~(d_bits(x, z) | d_bits(z, y))) != 0)
          throw Error(Errc::MetricAxiomViolation, "axiom (c) fails at " + pts(*this, {x, y, z}));
    }
}

BSet BSet::discrete(const BoolAlg& alg, int points) {
  if (points <= 0) throw Error(Errc::BadSpec, "a B-set needs a nonempty carrier");
  std::vector<std::string> labels;
  std::vector<Mask> metric;
  for (int i = 0; i < points; ++i) {
    labels.push_back("c" + std::to_string(i));
    for (int j = 0; j < points; ++j) metric.push_back(i == j ? 0 : alg.full_mask());
  }
  return BSet(alg, std::move(labels), std::move(metric));
}

BSet BSet::symmdiff(const BoolAlg& alg) {
  if (alg.atom_count() > 8) throw Error(Errc::CapExceeded, "symmetric-difference B-set needs at most 8 atoms");
  const Mask count = Mask{1} << alg.atom_count();
  std::vector<std::string> labels;
  std::vector<Mask> metric;
  for (Mask i = 0; i < count; ++i) {
    labels.push_back("c" + std::to_string(i));
    for (Mask j = 0; j < count; ++j) metric.push_back(i ^ j);
  }
  return BSet(alg, std::move(labels), std::move(metric));
}

BSet BSet::from_universe(const Universe& u, std::span<const SetId> xs) {
  std::vector<std::string> labels;
  std::vector<Mask> metric;
  for (SetId x : xs) {
    labels.push_back("s" + std::to_string(x));
    for (SetId y : xs) metric.push_back(u.algebra().full_mask() & ~u.eq_bits(x, y));
  }
  return BSet(u.algebra(), std::move(labels), std::move(metric));
}

std::optional<int> BSet::find(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

std::optional<int> mix_in_bset(const BSet& X, std::span<const Elem> parts, std::span<const int> xs) {
  if (parts.size() != xs.size()) throw Error(Errc::LengthMismatch, "mixing needs one element per block");
  std::optional<int> found;
  for (int x = 0; x < X.size(); ++x) {
    bool ok = true;
    for (std::size_t k = 0; k < parts.size() && ok; ++k) ok = (parts[k].bits & X.d_bits(x, xs[k])) == 0;
    if (!ok) continue;
    if (found) throw Error(Errc::InternalInconsistency, "two mixings found in a B-set");
    found = x;
  }
  return found;
}

std::vector<int> mix_set(const BSet& X, std::span<const int> A) {
  std::set<int> out;
  if (A.empty()) return {};
  const int atoms = X.algebra().atom_count();
  for_each_atom_choice(atoms, static_cast<int>(A.size()), [&](const std::vector<int>& choice) {
    std::vector<Elem> parts(A.size(), X.algebra().zero());
    for (int q = 0; q < atoms; ++q) parts[static_cast<std::size_t>(choice[static_cast<std::size_t>(q)])].bits |= Mask{1} << q;
    if (auto m = mix_in_bset(X, parts, A)) out.insert(*m);
  });
  return {out.begin(), out.end()};
}

std::vector<int> cyc(const BSet& X, std::span<const int> A) {
  std::vector<int> cur(A.begin(), A.end());
  std::sort(cur.begin(), cur.end());
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  while (true) {
    std::vector<int> next = mix_set(X, cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

bool is_universally_complete(const BSet& X) {
  std::vector<int> all(static_cast<std::size_t>(X.size()));
  for (int i = 0; i < X.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  const int atoms = X.algebra().atom_count();
  bool complete = true;
  for_each_atom_choice(atoms, X.size(), [&](const std::vector<int>& choice) {
    if (!complete) return;
    std::vector<Elem> parts;
    std::vector<int> xs;
    for (int q = 0; q < atoms; ++q) {
      parts.push_back(X.algebra().atom(q));
      xs.push_back(choice[static_cast<std::size_t>(q)]);
    }
    complete = mix_in_bset(X, parts, xs).has_value();
  });
  return complete;
}

std::size_t tuple_count(int carrier, int arity) {
  std::size_t n = 1;
  for (int i = 0; i < arity; ++i) {
    n *= static_cast<std::size_t>(carrier);
    if (n > (std::size_t{1} << 24)) throw Error(Errc::CapExceeded, "operation table too large");
  }
  return n;
}

std::vector<int> decode_tuple(std::size_t code, int carrier, int arity) {
  std::vector<int> out(static_cast<std::size_t>(arity));
  for (int i = 0; i < arity; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::size_t>(carrier));
    code /= static_cast<std::size_t>(carrier);
  }
  return out;
}

namespace {

Mask tuple_distance(const BSet& X, const std::vector<int>& a, const std::vector<int>& b) {
  Mask m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m |= X.d_bits(a[k], b[k]);
  return m;
}

template <class Cell>
bool contractive_table(const BSet& X, int arity, std::size_t cells, Cell&& dist) {
  if (cells != tuple_count(X.size(), arity)) throw Error(Errc::LengthMismatch, "table size does not match the arity");
  for (std::size_t i = 0; i < cells; ++i) {
    const auto a = decode_tuple(i, X.size(), arity);
    for (std::size_t j = i + 1; j < cells; ++j)
      if ((dist(i, j) & ~tuple_distance(X, a, decode_tuple(j, X.size(), arity))) != 0) return false;
  }
  return true;
}

}  // namespace

bool is_contractive_map(const BSet& X, const BSet& Y, std::span<const int> f) {
  if (f.size() != static_cast<std::size_t>(X.size())) throw Error(Errc::LengthMismatch, "map is not total");
  for (int x = 0; x < X.size(); ++x)
    for (int y = x + 1; y < X.size(); ++y)
      if ((Y.d_bits(f[static_cast<std::size_t>(x)], f[static_cast<std::size_t>(y)]) & ~X.d_bits(x, y)) != 0)
        return false;
  return true;
}

bool is_contractive_op(const BSet& X, int arity, std::span<const int> table) {
  return contractive_table(X, arity, table.size(), [&](std::size_t i, std::size_t j) { return X.d_bits(table[i], table[j]); });
}

bool is_contractive_pred(const BSet& X, int arity, std::span<const Mask> table) {
  return contractive_table(X, arity, table.size(), [&](std::size_t i, std::size_t j) { return table[i] ^ table[j]; });
}

BSystem BSystem::make(BSet base, Signature sig, std::map<std::string, std::vector<int>> ops,
                      std::map<std::string, std::vector<Mask>> preds) {
  for (const auto& [name, arity] : sig.functions()) {
    auto it = ops.find(name);
    if (it == ops.end()) throw Error(Errc::SignatureMismatch, "no table for operation " + name);
    for (int v : it->second)
      if (v < 0 || v >= base.size()) throw Error(Errc::BadSpec, "operation " + name + " leaves the carrier");
    if (!is_contractive_op(base, arity, it->second))
      throw Error(Errc::MetricAxiomViolation, "operation " + name + " is not contractive");
  }
  for (const auto& [name, arity] : sig.predicates()) {
    auto it = preds.find(name);
    if (it == preds.end()) throw Error(Errc::SignatureMismatch, "no table for predicate " + name);
    for (Mask v : it->second)
      if ((v & ~base.algebra().full_mask()) != 0) throw Error(Errc::AlgebraMismatch, "predicate " + name + " value");
    if (!is_contractive_pred(base, arity, it->second))
      throw Error(Errc::MetricAxiomViolation, "predicate " + name + " is not contractive");
  }
  if (ops.size() != sig.functions().size() || preds.size() != sig.predicates().size())
    throw Error(Errc::SignatureMismatch, "tables for symbols outside the signature");
  return {std::move(base), std::move(sig), std::move(ops), std::move(preds)};
}

namespace {

class SystemEvaluator {
 public:
  SystemEvaluator(const BSystem& S, const std::map<std::string, int>& a) : S_(S), base_(a) {}

  Mask eval(const Formula& f) {
    const Mask full = S_.base.algebra().full_mask();
    switch (f.kind) {
      case Formula::Kind::Mem:
      case Formula::Kind::BoundedForall:
      case Formula::Kind::BoundedExists:
        throw Error(Errc::MemNotInSignature, "membership is not part of an algebraic B-system");
      case Formula::Kind::Eq: return full & ~S_.base.d_bits(term(f.terms[0]), term(f.terms[1]));
      case Formula::Kind::Pred: {
        auto it = S_.preds.find(f.symbol);
        if (it == S_.preds.end()) throw Error(Errc::UnknownSymbol, "no predicate " + f.symbol);
        return it->second[code(f.terms)];
      }
      case Formula::Kind::Not: return full & ~eval(f.subs[0]);
      case Formula::Kind::And: return eval(f.subs[0]) & eval(f.subs[1]);
      case Formula::Kind::Or: return eval(f.subs[0]) | eval(f.subs[1]);
      case Formula::Kind::Imp: return (full & ~eval(f.subs[0])) | eval(f.subs[1]);
      case Formula::Kind::CarrierForall:
      case Formula::Kind::CarrierExists: {
        const bool universal = f.kind == Formula::Kind::CarrierForall;
        Mask acc = universal ? full : 0;
        for (int a = 0; a < S_.base.size(); ++a) {
          stack_.emplace_back(&f.symbol, a);
          const Mask body = eval(f.body());
          stack_.pop_back();
          acc = universal ? acc & body : acc | body;
        }
        return acc;
      }
    }
    return 0;
  }

 private:
  std::size_t code(const std::vector<Term>& args) {
    std::size_t c = 0;
    for (auto it = args.rbegin(); it != args.rend(); ++it)
      c = c * static_cast<std::size_t>(S_.base.size()) + static_cast<std::size_t>(term(*it));
    return c;
  }

  int term(const Term& t) {
    if (t.kind == Term::Kind::Var) {
      for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
        if (*it->first == t.name) return it->second;
      if (auto it = base_.find(t.name); it != base_.end()) return it->second;
    }
    if (auto it = S_.ops.find(t.name); it != S_.ops.end()) return it->second[code(t.args)];
    if (t.kind != Term::Kind::App)
      if (auto p = S_.base.find(t.name)) return *p;
    if (t.kind == Term::Kind::App) throw Error(Errc::UnknownSymbol, "no operation " + t.name);
    throw Error(Errc::UnboundVariable, "no value for " + t.name);
  }

  const BSystem& S_;
  const std::map<std::string, int>& base_;
  std::vector<std::pair<const std::string*, int>> stack_;
};

}  // namespace

Elem eval_bsystem(const BSystem& S, const Formula& f, const std::map<std::string, int>& a) {
  for (const auto& [var, v] : a)
    if (v < 0 || v >= S.base.size()) throw Error(Errc::BadSpec, "assignment of " + var + " leaves the carrier");
  SystemEvaluator ev(S, a);
  return S.base.algebra().elem(ev.eval(f));
}

HomReport check_homomorphism(std::span<const int> h, const BSystem& S1, const BSystem& S2) {
  if (!(S1.sig == S2.sig)) throw Error(Errc::SignatureMismatch, "systems have different signatures");
  if (S1.base.algebra().id() != S2.base.algebra().id())
    throw Error(Errc::AlgebraMismatch, "systems live over different algebras");
  if (h.size() != static_cast<std::size_t>(S1.base.size())) throw Error(Errc::LengthMismatch, "map is not total");
  const BSet& A = S1.base;
  const BSet& D = S2.base;
  const Mask full = A.algebra().full_mask();
  auto at = [&](int a) { return h[static_cast<std::size_t>(a)]; };

  HomReport r;
  bool hom = true, metric_eq = true, preds_eq = true;
  for (int x = 0; x < A.size(); ++x)
    for (int y = 0; y < A.size(); ++y) {
      const Mask dd = D.d_bits(at(x), at(y));
      if ((dd & ~A.d_bits(x, y)) != 0) hom = false;
      if (dd != A.d_bits(x, y)) metric_eq = false;
    }
  for (const auto& [name, arity] : S1.sig.functions()) {
    const auto& t1 = S1.ops.at(name);
    const auto& t2 = S2.ops.at(name);
    for (std::size_t c = 0; c < t1.size(); ++c) {
      const auto args = decode_tuple(c, A.size(), arity);
      std::size_t image = 0;
      for (auto it = args.rbegin(); it != args.rend(); ++it) image = image * static_cast<std::size_t>(D.size()) + static_cast<std::size_t>(at(*it));
      if (at(t1[c]) != t2[image]) hom = false;
    }
  }
  bool strong = true;
  for (const auto& [name, arity] : S1.sig.predicates()) {
    const auto& p1 = S1.preds.at(name);
    const auto& p2 = S2.preds.at(name);
    for (std::size_t c = 0; c < p1.size(); ++c) {
      const auto args = decode_tuple(c, A.size(), arity);
      std::size_t image = 0;
      for (auto it = args.rbegin(); it != args.rend(); ++it) image = image * static_cast<std::size_t>(D.size()) + static_cast<std::size_t>(at(*it));
      if ((p1[c] & ~p2[image]) != 0) hom = false;
      if (p1[c] != p2[image]) preds_eq = false;
    }
    if (arity == 0) continue;
    for (std::size_t e = 0; e < p2.size(); ++e) {
      const auto ds = decode_tuple(e, D.size(), arity);
      Mask reach = 0;
      for (std::size_t c = 0; c < p1.size(); ++c) {
        const auto as = decode_tuple(c, A.size(), arity);
        Mask m = p1[c];
        for (int k = 0; k < arity; ++k)
          m &= full & ~D.d_bits(ds[static_cast<std::size_t>(k)], at(as[static_cast<std::size_t>(k)]));
        reach |= m;
      }
      if ((p2[e] & ~reach) != 0) strong = false;
    }
  }
  r.hom = hom;
  r.strong = hom && strong;
  r.iso = hom && metric_eq && preds_eq;
  return r;
}

Realization realize_bset(Universe& u, const BSet& X, std::optional<int> rank_bound) {
  if (X.algebra().id() != u.algebra().id()) throw Error(Errc::AlgebraMismatch, "B-set and universe differ in algebra");
  const int atoms = X.algebra().atom_count();
  const int n = X.size();
  Realization r;
  int most = 0;
  for (int q = 0; q < atoms; ++q) {
    std::vector<int> cls(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int x = 0; x < n; ++x) {
      if (cls[static_cast<std::size_t>(x)] >= 0) continue;
      for (int y = x; y < n; ++y)
        if (((X.d_bits(x, y) >> q) & 1U) == 0) cls[static_cast<std::size_t>(y)] = next;
      ++next;
    }
    most = std::max(most, next);
    r.classes.push_back(std::move(cls));
  }
  // Class index k is coded by the ordinal k, of rank k.
  if (rank_bound && *rank_bound < most)
    throw Error(Errc::RankInsufficient, "class codes need rank " + std::to_string(most));
  std::vector<SetId> names;
  for (int k = 0; k < most; ++k) names.push_back(u.name(HFSet::ordinal(k)));
  std::vector<Entry> all;
  for (int x = 0; x < n; ++x) {
    std::vector<int> choice;
    for (int q = 0; q < atoms; ++q) choice.push_back(r.classes[static_cast<std::size_t>(q)][static_cast<std::size_t>(x)]);
    const SetId i = u.canonicalize(mix_by_atoms(u, choice, names));
    r.iota.push_back(i);
    all.push_back({i, u.algebra().full_mask()});
  }
  r.realized = u.make_bits(std::move(all));
  return r;
}

}  // namespace bvm
