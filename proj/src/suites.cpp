#include "bvm/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <set>

#include "bvm/arrows.hpp"
#include "bvm/bsets.hpp"
#include "bvm/evaluator.hpp"
#include "bvm/posets.hpp"
#include "bvm/random.hpp"

namespace bvm {

namespace {

class Tally {
 public:
  void check(bool ok, const std::function<std::string()>& what) {
    ++cases_;
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what();
  }
  std::size_t cases() const { return cases_; }
  std::size_t failures() const { return failures_; }
  const std::string& first() const { return first_; }

 private:
  std::size_t cases_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class T>
const T& choose(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(xs.size()) - 1))];
}

SetId choose(Rng& rng, const Fragment& f) { return f[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(f.size()) - 1))]; }

// One universe and fragment per atom count, built on demand.
class Lab {
 public:
  explicit Lab(int rank) : rank_(rank) {}

  Universe& universe(int atoms) { return *slot(atoms).u; }
  const Fragment& fragment(int atoms) { return slot(atoms).f; }

 private:
  struct Slot {
    std::unique_ptr<Universe> u;
    Fragment f;
  };
  Slot& slot(int atoms) {
    auto it = slots_.find(atoms);
    if (it != slots_.end()) return it->second;
    Slot s;
    s.u = std::make_unique<Universe>(BoolAlg(atoms));
    s.f = enumerate_universe(*s.u, rank_);
    return slots_.emplace(atoms, std::move(s)).first->second;
  }

  int rank_;
  std::map<int, Slot> slots_;
};

std::string show(const Universe& u, const Elem& e) { return u.algebra().format(e); }

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SuiteResult head(int id, std::string name, std::string title) {
  SuiteResult r;
  r.id = id;
  r.name = std::move(name);
  r.title = std::move(title);
  return r;
}

SuiteResult finish(SuiteResult r, const Tally& t, std::string summary) {
  r.cases = t.cases();
  r.failures = t.failures();
  r.pass = t.failures() == 0;
  r.detail = std::move(summary);
  if (!t.first().empty()) r.detail += "; first failure: " + t.first();
  return r;
}

// Criterion 1.
SuiteResult suite_los(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0x105);
  Lab lab(3);
  Tally t;
  FormulaShape shape{{"x", "y", "z"}, 4, 0.1};
  for (int i = 0; i < 600; ++i) {
    const int atoms = 1 + i % 3;
    Universe& u = lab.universe(atoms);
    const Fragment& frag = lab.fragment(atoms);
    const Formula f = random_restricted_formula(rng, shape);
    Assignment a;
    for (const auto& v : shape.free) a[v] = pick(rng, 0, 2) == 0 ? random_set(u, rng, 3) : choose(rng, frag);
    const LosReport rep = check_los(u, f, a);
    t.check(rep.holds && depth(f) <= 4 && is_restricted(f), [&] {
      return to_string(f) + " over " + std::to_string(atoms) + " atoms: [[f]]=" + show(u, rep.truth);
    });
  }
  SuiteResult r = head(1, "los", "Los/fiber soundness");
  r.seconds = elapsed(start);
  r = finish(r, t, "restricted formulas of depth <= 4 on rank-3 fragments over 1-3 atoms");
  if (r.seconds >= 60) {
    r.pass = false;
    r.detail += "; time limit of 60 s exceeded";
  }
  return r;
}

// Criterion 2.
SuiteResult suite_transfer(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0x7a5);
  const std::vector<HFSet> level = cumulative_level(4);
  std::map<int, std::unique_ptr<Universe>> us;
  Tally t;
  std::size_t classical_true = 0;
  FormulaShape shape{{"x", "y"}, 4, 0.1};
  for (int i = 0; i < 250; ++i) {
    const int atoms = 1 + i % 3;
    auto& slot = us[atoms];
    if (!slot) slot = std::make_unique<Universe>(BoolAlg(atoms));
    const Formula f = random_restricted_formula(rng, shape);
    HFAssignment a{{"x", choose(rng, level)}, {"y", choose(rng, level)}};
    const TransferReport rep = check_restricted_transfer(*slot, f, a);
    if (rep.classical) ++classical_true;
    t.check(rep.holds, [&] { return to_string(f) + ": classical " + std::to_string(rep.classical) + ", Boolean " + show(*slot, rep.boolean); });
  }
  SuiteResult r = head(2, "transfer", "Restricted transfer");
  r.seconds = elapsed(start);
  return finish(r, t, "HF arguments of rank <= 3, " + std::to_string(classical_true) + " classically true");
}

// Laws 2.2(1)-(6) and identities 3.2(4)-(5) for one triple and one element.
void check_laws(Universe& u, Tally& t, SetId x, SetId y, SetId z, const Elem& b, const std::vector<Formula>& corpus) {
  const Mask full = u.algebra().full_mask();
  auto eq = [&](SetId a, SetId c) { return u.eq_bits(a, c); };
  auto mem = [&](SetId a, SetId c) { return u.mem_bits(a, c); };
  auto le = [](Mask a, Mask c) { return (a & ~c) == 0; };
  const std::string where = " at " + u.describe(x) + ", " + u.describe(y) + ", " + u.describe(z);
  t.check(eq(x, x) == full, [&] { return "(1)" + where; });
  t.check(eq(x, y) == eq(y, x), [&] { return "(2)" + where; });
  t.check(le(eq(x, y) & eq(y, z), eq(x, z)), [&] { return "(3)" + where; });
  t.check(le(eq(x, y) & mem(z, x), mem(z, y)), [&] { return "(4)" + where; });
  t.check(le(eq(x, y) & mem(x, z), mem(y, z)), [&] { return "(5)" + where; });
  for (const Formula& f : corpus) {
    const Mask fx = eval_bv(u, f, {{"x", x}, {"z", z}}).bits;
    const Mask fy = eval_bv(u, f, {{"x", y}, {"z", z}}).bits;
    t.check(le(eq(x, y) & fx, fy), [&] { return "(6) " + to_string(f) + where; });
  }
  const SetId bx = u.scale(b, x);
  const SetId by = u.scale(b, y);
  const Mask empty_x = eq(x, u.empty_set());
  t.check(mem(x, by) == (b.bits & mem(x, y)), [&] { return "3.2(4) membership" + where; });
  t.check(eq(bx, by) == ((full & ~b.bits) | eq(x, y)), [&] { return "3.2(4) equality" + where; });
  t.check(eq(bx, x) == (b.bits | empty_x), [&] { return "3.2(5) [[bx=x]]" + where; });
  t.check(eq(bx, u.empty_set()) == ((full & ~b.bits) | empty_x), [&] { return "3.2(5) [[bx=0]]" + where; });
}

// Criterion 3.
SuiteResult suite_laws(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0x1a3);
  Tally t;
  std::vector<Formula> corpus;
  FormulaShape shape{{"x", "z"}, 3, 0.0};
  for (int i = 0; i < 12; ++i) corpus.push_back(random_restricted_formula(rng, shape));

  Universe b4(BoolAlg(2));
  const Fragment small = enumerate_universe(b4, 2);
  for (SetId x : small)
    for (SetId y : small)
      for (SetId z : small)
        for (const Elem& b : b4.algebra().elements()) check_laws(b4, t, x, y, z, b, corpus);
  const std::size_t exhaustive = t.cases();

  Lab lab(3);
  for (int i = 0; i < 300; ++i) {
    const int atoms = 2 + i % 2;
    Universe& u = lab.universe(atoms);
    const Fragment& frag = lab.fragment(atoms);
    auto draw = [&] { return pick(rng, 0, 2) == 0 ? random_set(u, rng, 3) : choose(rng, frag); };
    const SetId x = draw(), y = draw(), z = draw();
    check_laws(u, t, x, y, z, random_elem(u.algebra(), rng), corpus);
  }
  SuiteResult r = head(3, "laws", "Truth-value laws and scaling identities");
  r.seconds = elapsed(start);
  return finish(r, t,
                std::to_string(exhaustive) + " exhaustive checks on the B4 rank-2 fragment (" +
                    std::to_string(small.size()) + " sets), rest randomized on 2-3 atoms at rank 3");
}

// Criterion 4.
}  // namespace

SuiteResult escher_check(const SuiteOptions& opts, int rank, int samples) {
  if (rank < 2) throw Error(Errc::BadSpec, "escher-check needs rank >= 2");
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0xe5c);
  Lab lab(rank);
  Tally t;
  auto subset = [&](const Fragment& frag, int lo, int hi) {
    std::vector<SetId> xs;
    const int k = pick(rng, lo, hi);
    for (int i = 0; i < k; ++i) xs.push_back(choose(rng, frag));
    return xs;
  };
  auto extensional_map = [&](Universe& u, const Fragment& frag, const std::vector<SetId>& xs) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      ExtMap f{xs, {}};
      for (std::size_t i = 0; i < xs.size(); ++i) f.image.push_back(choose(rng, frag));
      if (is_extensional(u, f)) return f;
    }
    return ExtMap{xs, std::vector<SetId>(xs.size(), choose(rng, frag))};
  };
  for (int i = 0; i < samples; ++i) {
    const int atoms = 1 + (i / 4) % 3;
    Universe& u = lab.universe(atoms);
    const Fragment& frag = lab.fragment(atoms);
    switch (i % 4) {
      case 0: {
        const auto xs = subset(frag, 1, 3);
        const auto down = descent(u, u.ascent(xs), frag);
        t.check(same_classes(u, down, mix_closure(u, xs)), [&] { return std::string("X up down != mix(X)"); });
        break;
      }
      case 1: {
        SetId y = u.empty_set();
        while (u.eq_bits(y, u.empty_set()) != 0) y = random_set(u, rng, rank, 4);
        const auto down = descent(u, y, frag);
        t.check(u.truth_eq(u.ascent(down), y).is_one(), [&] { return "Y down up != Y for " + u.describe(y); });
        break;
      }
      case 2: {
        const auto xs = subset(frag, 1, 4);
        const ExtMap f = extensional_map(u, frag, xs);
        const SetId g = ascend_function(u, f);
        const ExtMap back = descend_function(u, g, u.ascent(f.source), u.ascent(f.image), frag);
        const Fragment dom(u, back.source);
        bool ok = true;
        for (std::size_t k = 0; k < f.source.size() && ok; ++k) {
          auto at = dom.find(u, f.source[k]);
          std::size_t j = 0;
          while (at && j < back.source.size() && !u.truth_eq(back.source[j], f.source[k]).is_one()) ++j;
          ok = at && j < back.source.size() && u.truth_eq(back.image[j], f.image[k]).is_one();
        }
        t.check(ok, [&] { return std::string("f up down differs from f on X"); });
        break;
      }
      default: {
        const auto xs = subset(frag, 1, 3);
        const ExtMap f1 = extensional_map(u, frag, xs);
        const ExtMap f2 = extensional_map(u, frag, xs);
        std::vector<SetId> ys = f1.image;
        ys.insert(ys.end(), f2.image.begin(), f2.image.end());
        const Elem b = random_elem(u.algebra(), rng);
        const std::vector<Elem> parts{b, complement(b)};
        const std::vector<SetId> graphs{ascend_function(u, f1), ascend_function(u, f2)};
        const SetId g = u.mix(parts, graphs);
        const SetId X = u.ascent(xs);
        const ExtMap down = descend_function(u, g, X, u.ascent(ys), frag);
        t.check(u.truth_eq(ascend_function(u, down), g).is_one(), [&] { return "g down up != g, b=" + show(u, b); });
      }
    }
  }
  SuiteResult r = head(4, "escher", "Escher rules");
  r.seconds = elapsed(start);
  return finish(r, t, "four rules cycled over " + std::to_string(samples) + " instances, rank-" + std::to_string(rank) +
                          " fragments over 1-3 atoms");
}

namespace {

SuiteResult suite_escher(const SuiteOptions& opts) { return escher_check(opts, 3, 160); }

// Criterion 5.
SuiteResult suite_mixing(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0x313);
  Lab lab(3);
  Tally t;
  std::size_t made = 0;
  for (int i = 0; made < 150 && i < 2000; ++i) {
    const int atoms = 1 + i % 3;
    Universe& u = lab.universe(atoms);
    const Fragment& frag = lab.fragment(atoms);
    const auto parts = random_partition(u.algebra(), rng, pick(rng, 1, atoms + 1));
    std::vector<SetId> xs;
    for (int attempt = 0; attempt < 100 && xs.size() < parts.size(); ++attempt) {
      const SetId c = choose(rng, frag);
      if (std::all_of(xs.begin(), xs.end(), [&](SetId x) { return u.eq_bits(x, c) == 0; })) xs.push_back(c);
    }
    if (xs.size() != parts.size()) continue;
    ++made;
    const SetId m = u.mix(parts, xs);
    for (std::size_t k = 0; k < parts.size(); ++k)
      t.check(u.truth_eq(m, xs[k]) == parts[k], [&] {
        return "block " + show(u, parts[k]) + " recovered as " + show(u, u.truth_eq(m, xs[k]));
      });
  }
  SuiteResult r = head(5, "mixing", "Mixing reconstruction");
  r.seconds = elapsed(start);
  r = finish(r, t, std::to_string(made) + " families of pairwise distinct sets");
  if (made < 100) r.pass = false;
  return r;
}

// Canonical code of a poset with bottom 0 under relabeling of the rest.
std::vector<bool> canonical_code(const std::vector<std::vector<bool>>& leq) {
  const int n = static_cast<int>(leq.size());
  std::vector<int> perm(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n - 1; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
  std::vector<bool> best;
  do {
    std::vector<bool> code;
    for (int i = 0; i < n - 1; ++i)
      for (int j = 0; j < n - 1; ++j) code.push_back(leq[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])][static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]);
    if (best.empty() || code < best) best = code;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// All posets with bottom on n points, one per isomorphism class.
std::vector<FinPoset> posets_up_to_iso(int n) {
  std::vector<FinPoset> out;
  std::set<std::vector<bool>> seen;
  const int k = n - 1;
  const int slots = k * (k - 1);
  for (long mask = 0; mask < (1L << slots); ++mask) {
    std::vector<std::vector<bool>> leq(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int i = 0; i < n; ++i) leq[0][static_cast<std::size_t>(i)] = leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
    int bit = 0;
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j)
        if (i != j) leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ((mask >> bit++) & 1) != 0;
    bool order = true;
    for (int i = 1; i < n && order; ++i)
      for (int j = 1; j < n && order; ++j) {
        if (i != j && leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] && leq[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) order = false;
        for (int l = 1; l < n && order; ++l)
          if (leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] && leq[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] && !leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)]) order = false;
      }
    if (!order || !seen.insert(canonical_code(leq)).second) continue;
    std::vector<std::string> labels{"0"};
    for (int i = 1; i < n; ++i) labels.push_back("p" + std::to_string(i));
    out.emplace_back(std::move(labels), leq);
  }
  return out;
}

std::string describe_poset(const FinPoset& P) {
  std::string s;
  for (int p = 0; p < P.size(); ++p)
    for (int q = 0; q < P.size(); ++q)
      if (p != q && p != P.bottom() && P.leq(p, q)) s += (s.empty() ? "" : " ") + P.label(p) + "<" + P.label(q);
  return std::to_string(P.size()) + " points {" + s + "}";
}

// Criterion 6.
SuiteResult suite_posets(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0x905);
  Tally t;
  std::size_t not_boolean = 0, disagree = 0, classes = 0;
  auto examine = [&](const FinPoset& P) {
    bool boolean = true;
    try {
      completion(P);
    } catch (const Error& e) {
      if (e.code() != Errc::NotBoolean) throw;
      boolean = false;
      ++not_boolean;
    }
    const RefinedReport rep = refinedness_conditions(P);
    if (!rep.consistent()) ++disagree;
    t.check(boolean && rep.consistent(), [&] {
      std::string why = describe_poset(P) + ":";
      if (!boolean) why += " NotBoolean;";
      why += " (a)=" + std::to_string(rep.separation) + " (b)=" + std::to_string(rep.principal_is_interval) +
             " (c)=" + std::to_string(rep.injective) + " (d)=" + std::to_string(rep.dense_embedding);
      return why;
    });
  };
  // The one-point poset has the degenerate algebra and is left out.
  for (int n = 2; n <= 5; ++n)
    for (const FinPoset& P : posets_up_to_iso(n)) {
      ++classes;
      examine(P);
    }
  for (int i = 0; i < 200; ++i) {
    const int n = pick(rng, 2, 10);
    const double chance = std::uniform_real_distribution<double>(0.1, 0.7)(rng);
    examine(random_poset(rng, n, chance));
  }
  SuiteResult r = head(6, "posets", "Poset completion and refinedness");
  r.seconds = elapsed(start);
  r = finish(r, t,
             std::to_string(classes) + " isomorphism classes on 2-5 points plus 200 random on 2-10 points; NotBoolean " +
                 std::to_string(not_boolean) + ", conditions disagree on " + std::to_string(disagree));
  if (r.seconds >= 120) {
    r.pass = false;
    r.detail += "; time limit of 120 s exceeded";
  }
  return r;
}

// Criterion 7.
SuiteResult suite_forcing(const SuiteOptions&) {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  t.check(forcing_c(1, 2).size() - 1 == 3, [] { return std::string("|C(1,2)| != 3"); });
  t.check(forcing_c(2, 2).size() - 1 == 9, [] { return std::string("|C(2,2)| != 9"); });
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      // Count partial functions directly: each point is undefined or takes one of m values.
      std::size_t direct = 1;
      for (int i = 0; i < n; ++i) direct *= static_cast<std::size_t>(m + 1);
      const std::size_t size = static_cast<std::size_t>(forcing_c(n, m).size() - 1);
      t.check(size == direct && size == forcing_c_count(n, m), [&] {
        return "|C(" + std::to_string(n) + "," + std::to_string(m) + ")| = " + std::to_string(size);
      });
    }
  const FinPoset c12 = forcing_c(1, 2);
  const Completion comp = completion(c12);
  const bool four = comp.algebra.atom_count() == 2 && comp.algebra.atom_name(0) == "[f0]" && comp.algebra.atom_name(1) == "[f1]";
  t.check(four, [] { return std::string("completion of C(1,2) is not the four-element algebra on [f0], [f1]"); });
  std::string single_value;
  for (int n = 1; n <= 3; ++n) {
    for (int m = 2; m <= 3; ++m) {
      const FinPoset P = forcing_c(n, m);
      const RefinedReport rep = refinedness_conditions(P);
      t.check(rep.consistent() && rep.separation, [&] {
        return "C(" + std::to_string(n) + "," + std::to_string(m) + ") is not refined";
      });
    }
    if (refinedness_conditions(forcing_c(n, 1)).separation) single_value += " C(" + std::to_string(n) + ",1)";
  }
  SuiteResult r = head(7, "forcing", "Forcing combinatorics");
  r.seconds = elapsed(start);
  return finish(r, t,
                "sizes for n,m in 1..3; refinedness for n in 1..3, m in 2..3 (any two conditions of C(n,1) are "
                "compatible, so it is not refined" + std::string(single_value.empty() ? "" : ", except" + single_value) + ")");
}

// Criterion 8.
SuiteResult suite_psi(const SuiteOptions&) {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  std::size_t autos = 0;
  for (int atoms = 1; atoms <= 3; ++atoms) {
    Universe u{BoolAlg(atoms)};
    const auto elems = u.algebra().elements();
    for (const auto& perm : all_permutations(atoms)) {
      ++autos;
      const Hom rho = Hom::permutation(u.algebra(), perm);
      const SetId psi = psi_rho(u, rho);
      for (const Elem& b : elems) {
        const Elem got = u.truth_mem(u.name(element_code(b)), psi);
        t.check(got == rho(b), [&] { return "(a) fails at b=" + show(u, b); });
      }
      // (b) for two-element A: rho preserves meets, so the value is one.
      const Formula meet_closed = parse_formula("a in psi /\\ b in psi -> c in psi");
      for (const Elem& a : elems)
        for (const Elem& b : elems) {
          const Elem v = eval_bv(u, meet_closed,
                                 {{"psi", psi}, {"a", u.name(element_code(a))}, {"b", u.name(element_code(b))},
                                  {"c", u.name(element_code(meet(a, b)))}});
          t.check(v.is_one(), [&] { return "(b) fails at " + show(u, a) + ", " + show(u, b); });
        }
      const Elem uf = eval_bv(u, ultrafilter_formula(), ultrafilter_assignment(u, psi));
      t.check(uf.is_one(), [&] { return "ultrafilter formula has value " + show(u, uf); });
    }
  }
  SuiteResult r = head(8, "psi", "psi_rho and the internal ultrafilter");
  r.seconds = elapsed(start);
  return finish(r, t, std::to_string(autos) + " automorphisms of algebras with 1-3 atoms");
}

// Criterion 9.
SuiteResult suite_two_point(const SuiteOptions&) {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  for (int atoms = 1; atoms <= 3; ++atoms) {
    Universe u{BoolAlg(atoms)};
    const TwoPointDescent d = descend_two_point(u);
    t.check(d.truth_values_ok, [&] { return std::to_string(atoms) + " atoms: truth values of chi"; });
    t.check(d.bijective, [&] { return std::to_string(atoms) + " atoms: chi is not onto the descent"; });
    t.check(d.preserves_ops, [&] { return std::to_string(atoms) + " atoms: operations not preserved"; });
  }
  SuiteResult r = head(9, "two-point", "Descent of the two-point algebra");
  r.seconds = elapsed(start);
  return finish(r, t, "algebras of size 2, 4 and 8");
}

// Criterion 10.
SuiteResult suite_realization(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0x4ea);
  Lab lab(3);
  Tally t;
  std::size_t descents = 0;
  for (int i = 0; i < 75; ++i) {
    const int atoms = 1 + i % 3;
    const int points = pick(rng, 1, 5);
    Universe& u = lab.universe(atoms);
    const bool discrete = i % 5 == 0;
    const BSet X = discrete ? BSet::discrete(u.algebra(), points) : random_bset(u.algebra(), rng, points);
    const Realization real = realize_bset(u, X);
    for (int x = 0; x < X.size(); ++x)
      for (int y = 0; y < X.size(); ++y) {
        const Elem ne = complement(u.truth_eq(real.iota[static_cast<std::size_t>(x)], real.iota[static_cast<std::size_t>(y)]));
        t.check(ne == X.d(x, y), [&] { return "d(" + X.label(x) + "," + X.label(y) + ") != [[i(x) != i(y)]]"; });
      }
    if (discrete)
      for (int x = 0; x < X.size(); ++x)
        t.check(u.truth_eq(real.iota[static_cast<std::size_t>(x)], u.name(HFSet::ordinal(x))).is_one(),
                [&] { return "discrete point " + X.label(x) + " is not a standard name"; });
    int classes = 0;
    for (const auto& row : real.classes) classes = std::max(classes, *std::max_element(row.begin(), row.end()) + 1);
    if (classes <= 3) {
      ++descents;
      const auto down = descent(u, real.realized, lab.fragment(atoms));
      t.check(same_classes(u, down, mix_closure(u, real.iota)), [] { return std::string("descent is not the mixings of iota"); });
    }
  }
  SuiteResult r = head(10, "realization", "Boolean-valued realization of B-sets");
  r.seconds = elapsed(start);
  return finish(r, t, "75 B-sets (15 discrete), carriers of 1-5 points over 1-3 atoms; " + std::to_string(descents) +
                          " descents compared with mixings");
}

// Classical satisfaction over 0/1 tables, written independently of eval_bsystem.
struct ClassicalModel {
  int size;
  std::map<std::string, std::vector<int>> ops;
  std::map<std::string, std::vector<bool>> preds;
  std::map<std::string, int> consts;

  int term(const Term& t, std::map<std::string, int>& env) const {
    if (t.kind == Term::Kind::App || ops.count(t.name)) {
      std::size_t code = 0, scale = 1;
      for (const Term& a : t.args) {
        code += scale * static_cast<std::size_t>(term(a, env));
        scale *= static_cast<std::size_t>(size);
      }
      return ops.at(t.name)[code];
    }
    if (auto it = env.find(t.name); it != env.end()) return it->second;
    return consts.at(t.name);
  }

  bool holds(const Formula& f, std::map<std::string, int>& env) const {
    switch (f.kind) {
      case Formula::Kind::Eq: return term(f.terms[0], env) == term(f.terms[1], env);
      case Formula::Kind::Pred: {
        std::size_t code = 0, scale = 1;
        for (const Term& a : f.terms) {
          code += scale * static_cast<std::size_t>(term(a, env));
          scale *= static_cast<std::size_t>(size);
        }
        return preds.at(f.symbol)[code];
      }
      case Formula::Kind::Not: return !holds(f.subs[0], env);
      case Formula::Kind::And: return holds(f.subs[0], env) && holds(f.subs[1], env);
      case Formula::Kind::Or: return holds(f.subs[0], env) || holds(f.subs[1], env);
      case Formula::Kind::Imp: return !holds(f.subs[0], env) || holds(f.subs[1], env);
      case Formula::Kind::CarrierForall:
      case Formula::Kind::CarrierExists: {
        const bool all = f.kind == Formula::Kind::CarrierForall;
        auto saved = env.find(f.symbol) == env.end() ? std::optional<int>() : std::optional<int>(env[f.symbol]);
        bool result = all;
        for (int a = 0; a < size && result == all; ++a) {
          env[f.symbol] = a;
          result = holds(f.body(), env);
        }
        if (saved)
          env[f.symbol] = *saved;
        else
          env.erase(f.symbol);
        return result;
      }
      default: throw Error(Errc::MemNotInSignature, "classical model has no membership");
    }
  }
};

// Criterion 11.
SuiteResult suite_bsystem(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0xb57);
  Tally t;
  std::size_t two_valued = 0;
  for (int i = 0; i < 240; ++i) {
    const BoolAlg alg(1 + i % 3);
    const int n = pick(rng, 2, 4);
    BSet base = BSet::discrete(alg, n);
    Signature sig;
    sig.predicate("le", 2).predicate("P", 1).function("s", 1).function("o", 0);
    ClassicalModel model{n, {}, {}, {}};
    std::map<std::string, std::vector<int>> ops;
    std::map<std::string, std::vector<Mask>> preds;
    for (const auto& [name, arity] : sig.functions()) {
      std::vector<int> table(tuple_count(n, arity));
      for (int& v : table) v = pick(rng, 0, n - 1);
      ops[name] = table;
      model.ops[name] = table;
    }
    for (const auto& [name, arity] : sig.predicates()) {
      std::vector<Mask> table(tuple_count(n, arity));
      std::vector<bool> truth(table.size());
      for (std::size_t k = 0; k < table.size(); ++k) {
        truth[k] = pick(rng, 0, 1) == 1;
        table[k] = truth[k] ? alg.full_mask() : 0;
      }
      preds[name] = table;
      model.preds[name] = truth;
    }
    std::vector<std::string> labels = base.labels();
    for (int k = 0; k < n; ++k) model.consts[labels[static_cast<std::size_t>(k)]] = k;
    const BSystem S = BSystem::make(std::move(base), sig, ops, preds);
    const Formula f = random_system_formula(rng, sig, {"x"}, labels, 4);
    const int x = pick(rng, 0, n - 1);
    const Elem v = eval_bsystem(S, f, {{"x", x}});
    std::map<std::string, int> env{{"x", x}};
    const bool classical = model.holds(f, env);
    if (v.is_zero() || v.is_one()) ++two_valued;
    t.check((v.is_zero() || v.is_one()) && v.is_one() == classical, [&] {
      return to_string(f) + ": |f| = " + alg.format(v) + ", classical " + std::to_string(classical);
    });
  }
  SuiteResult r = head(11, "bsystem", "B-system conventionality");
  r.seconds = elapsed(start);
  return finish(r, t, "discrete carriers of 2-4 points with classical tables; " + std::to_string(two_valued) + " two-valued");
}

// Criterion 12.
SuiteResult suite_maximum(const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(opts.seed ^ 0x3a7);
  Lab lab3(3);
  Lab lab2(2);
  Tally t;
  FormulaShape shape{{"x", "y"}, 3, 0.0};
  for (int i = 0; i < 150; ++i) {
    const int atoms = 1 + i % 3;
    Lab& lab = i % 2 == 0 ? lab3 : lab2;
    Universe& u = lab.universe(atoms);
    const Fragment& frag = lab.fragment(atoms);
    const Formula f = random_restricted_formula(rng, shape);
    const SetId y = pick(rng, 0, 1) == 0 ? random_set(u, rng, 3, 3) : choose(rng, frag);
    Mask sup = 0;
    for (SetId x : frag) sup |= eval_bv(u, f, {{"x", x}, {"y", y}}).bits;
    const MaxWitness w = find_max_witness(u, f, "x", {{"y", y}}, frag);
    const Elem at = eval_bv(u, f, {{"x", w.witness}, {"y", y}});
    t.check(w.value.bits == sup && at.bits == sup && frag.find(u, w.witness).has_value(), [&] {
      return to_string(f) + ": sup " + u.algebra().format(u.elem(sup)) + ", witness attains " + show(u, at);
    });
  }
  SuiteResult r = head(12, "maximum", "Fragment maximum principle");
  r.seconds = elapsed(start);
  return finish(r, t, "rank-2 and rank-3 fragments over 1-3 atoms");
}

using SuiteFn = SuiteResult (*)(const SuiteOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"los", suite_los},         {"transfer", suite_transfer}, {"laws", suite_laws},
      {"escher", suite_escher},   {"mixing", suite_mixing},     {"posets", suite_posets},
      {"forcing", suite_forcing}, {"psi", suite_psi},           {"two-point", suite_two_point},
      {"realization", suite_realization}, {"bsystem", suite_bsystem}, {"maximum", suite_maximum},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
  const auto& reg = registry();
  for (std::size_t i = 0; i < reg.size(); ++i)
    if (reg[i].first == name) {
      try {
        return reg[i].second(opts);
      } catch (const Error& e) {
        SuiteResult r;
        r.id = static_cast<int>(i) + 1;
        r.title = name;
        r.name = name;
        r.detail = "aborted: " + std::string(errc_name(e.code())) + ": " + e.what();
        return r;
      }
    }
  throw Error(Errc::UnknownSymbol, "no suite named " + name);
}

std::vector<SuiteResult> run_all_suites(const SuiteOptions& opts) {
  std::vector<SuiteResult> out;
  for (const auto& name : suite_names()) out.push_back(run_suite(name, opts));
  return out;
}

}  // namespace bvm
