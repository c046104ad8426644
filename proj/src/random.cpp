#include "bvm/random.hpp"

#include <algorithm>

namespace bvm {

namespace {

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& choose(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(pick(rng, static_cast<int>(xs.size())))];
}

class SetFormulaGen {
 public:
  SetFormulaGen(Rng& rng, const FormulaShape& shape) : rng_(rng), shape_(shape) {}

  Formula gen(std::vector<std::string>& scope, int depth) {
    if (depth == 0 || scope.empty() || coin(rng_, 0.25)) return atomic(scope);
    switch (pick(rng_, 6)) {
      case 0: return fm::neg(gen(scope, depth - 1));
      case 1: return fm::conj(gen(scope, depth - 1), gen(scope, depth - 1));
      case 2: return fm::disj(gen(scope, depth - 1), gen(scope, depth - 1));
      case 3: return fm::imp(gen(scope, depth - 1), gen(scope, depth - 1));
      default: {
        const std::string bound = choose(rng_, scope);
        const std::string var = "u" + std::to_string(fresh_++);
        scope.push_back(var);
        Formula body = gen(scope, depth - 1);
        scope.pop_back();
        return coin(rng_, 0.5) ? fm::forall_in(var, Term::var(bound), std::move(body))
                               : fm::exists_in(var, Term::var(bound), std::move(body));
      }
    }
  }

 private:
  Term term(const std::vector<std::string>& scope) {
    if (coin(rng_, shape_.pair_chance))
      return Term::app("pair", {Term::var(choose(rng_, scope)), Term::var(choose(rng_, scope))});
    return Term::var(choose(rng_, scope));
  }

  Formula atomic(const std::vector<std::string>& scope) {
    if (scope.empty()) throw Error(Errc::BadSpec, "formula generator needs a variable");
    Term a = term(scope);
    Term b = term(scope);
    return coin(rng_, 0.5) ? fm::mem(std::move(a), std::move(b)) : fm::eq(std::move(a), std::move(b));
  }

  Rng& rng_;
  const FormulaShape& shape_;
  int fresh_ = 0;
};

class SystemFormulaGen {
 public:
  SystemFormulaGen(Rng& rng, const Signature& sig, const std::vector<std::string>& constants)
      : rng_(rng), sig_(sig), constants_(constants) {
    for (const auto& [name, arity] : sig.predicates()) preds_.emplace_back(name, arity);
    for (const auto& [name, arity] : sig.functions()) funcs_.emplace_back(name, arity);
  }

  Formula gen(std::vector<std::string>& scope, int depth) {
    if (depth == 0 || coin(rng_, 0.25)) return atomic(scope);
    switch (pick(rng_, 6)) {
      case 0: return fm::neg(gen(scope, depth - 1));
      case 1: return fm::conj(gen(scope, depth - 1), gen(scope, depth - 1));
      case 2: return fm::disj(gen(scope, depth - 1), gen(scope, depth - 1));
      case 3: return fm::imp(gen(scope, depth - 1), gen(scope, depth - 1));
      default: {
        const std::string var = "v" + std::to_string(fresh_++);
        scope.push_back(var);
        Formula body = gen(scope, depth - 1);
        scope.pop_back();
        return coin(rng_, 0.5) ? fm::forall(var, std::move(body)) : fm::exists(var, std::move(body));
      }
    }
  }

 private:
  Term term(const std::vector<std::string>& scope, int depth) {
    if (depth > 0 && !funcs_.empty() && coin(rng_, 0.3)) {
      const auto& [name, arity] = choose(rng_, funcs_);
      if (arity == 0) return Term::constant(name);
      std::vector<Term> args;
      for (int i = 0; i < arity; ++i) args.push_back(term(scope, depth - 1));
      return Term::app(name, std::move(args));
    }
    if (!constants_.empty() && (scope.empty() || coin(rng_, 0.2))) return Term::var(choose(rng_, constants_));
    return Term::var(choose(rng_, scope));
  }

  Formula atomic(const std::vector<std::string>& scope) {
    if (!preds_.empty() && coin(rng_, 0.6)) {
      const auto& [name, arity] = choose(rng_, preds_);
      std::vector<Term> args;
      for (int i = 0; i < arity; ++i) args.push_back(term(scope, 1));
      return fm::pred(name, std::move(args));
    }
    return fm::eq(term(scope, 1), term(scope, 1));
  }

  Rng& rng_;
  const Signature& sig_;
  const std::vector<std::string>& constants_;
  std::vector<std::pair<std::string, int>> preds_;
  std::vector<std::pair<std::string, int>> funcs_;
  int fresh_ = 0;
};

}  // namespace

Formula random_restricted_formula(Rng& rng, const FormulaShape& shape) {
  SetFormulaGen gen(rng, shape);
  std::vector<std::string> scope = shape.free;
  return gen.gen(scope, shape.max_depth);
}

Formula random_system_formula(Rng& rng, const Signature& sig, const std::vector<std::string>& free,
                              const std::vector<std::string>& constants, int max_depth) {
  if (free.empty() && constants.empty()) throw Error(Errc::BadSpec, "formula generator needs a variable or constant");
  SystemFormulaGen gen(rng, sig, constants);
  std::vector<std::string> scope = free;
  return gen.gen(scope, max_depth);
}

SetId random_set(Universe& u, Rng& rng, int rank, int max_width) {
  if (rank <= 1) return u.empty_set();
  const int width = pick(rng, max_width + 1);
  std::vector<Entry> es;
  for (int i = 0; i < width; ++i) {
    const SetId child = random_set(u, rng, rank - 1, max_width);
    es.push_back({child, random_elem(u.algebra(), rng).bits});
  }
  return u.make_bits(std::move(es));
}

Elem random_elem(const BoolAlg& alg, Rng& rng) {
  return alg.elem(std::uniform_int_distribution<Mask>(0, ~Mask{0})(rng) & alg.full_mask());
}

std::vector<Elem> random_partition(const BoolAlg& alg, Rng& rng, int blocks) {
  std::vector<Mask> bits(static_cast<std::size_t>(blocks), 0);
  for (int q = 0; q < alg.atom_count(); ++q) bits[static_cast<std::size_t>(pick(rng, blocks))] |= Mask{1} << q;
  std::vector<Elem> out;
  for (Mask b : bits)
    if (b != 0) out.push_back(alg.elem(b));
  return out;
}

BSet random_bset(const BoolAlg& alg, Rng& rng, int points) {
  const int atoms = alg.atom_count();
  for (;;) {
    std::vector<std::vector<int>> cls(static_cast<std::size_t>(atoms));
    for (auto& c : cls)
      for (int x = 0; x < points; ++x) c.push_back(pick(rng, points));
    std::vector<Mask> metric;
    bool separated = true;
    for (int x = 0; x < points; ++x)
      for (int y = 0; y < points; ++y) {
        Mask d = 0;
        for (int q = 0; q < atoms; ++q)
          if (cls[static_cast<std::size_t>(q)][static_cast<std::size_t>(x)] != cls[static_cast<std::size_t>(q)][static_cast<std::size_t>(y)])
            d |= Mask{1} << q;
        if (x != y && d == 0) separated = false;
        metric.push_back(d);
      }
    if (!separated) continue;
    std::vector<std::string> labels;
    for (int x = 0; x < points; ++x) labels.push_back("c" + std::to_string(x));
    return BSet(alg, std::move(labels), std::move(metric));
  }
}

FinPoset random_poset(Rng& rng, int size, double edge_chance) {
  if (size < 1) throw Error(Errc::BadSpec, "a poset needs a bottom element");
  // Edges only go up a random linear order, so the closure is antisymmetric.
  std::vector<int> order(static_cast<std::size_t>(size - 1));
  for (int i = 0; i < size - 1; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::string> labels{"0"};
  std::vector<std::pair<int, int>> below;
  for (int i = 1; i < size; ++i) {
    labels.push_back("p" + std::to_string(i));
    below.emplace_back(0, i);
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (coin(rng, edge_chance)) below.emplace_back(order[i], order[j]);
  return FinPoset::from_pairs(std::move(labels), below);
}

}  // namespace bvm
