#include "bvm/evaluator.hpp"

#include <algorithm>
#include <bit>

namespace bvm {

namespace {

// Bindings searched innermost first.
class Env {
 public:
  explicit Env(const Assignment& base) : base_(base) {}

  void push(const std::string& var, SetId value) { stack_.emplace_back(&var, value); }
  void pop() { stack_.pop_back(); }

  std::optional<SetId> lookup(const std::string& var) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
      if (*it->first == var) return it->second;
    if (auto it = base_.find(var); it != base_.end()) return it->second;
    return std::nullopt;
  }

 private:
  const Assignment& base_;
  std::vector<std::pair<const std::string*, SetId>> stack_;
};

class BvEvaluator {
 public:
  BvEvaluator(Universe& u, const Assignment& a, const Fragment* carrier) : u_(u), env_(a), carrier_(carrier) {}

  Mask eval(const Formula& f) {
    const Mask full = u_.algebra().full_mask();
    switch (f.kind) {
      case Formula::Kind::Mem: return u_.mem_bits(term(f.terms[0]), term(f.terms[1]));
      case Formula::Kind::Eq: return u_.eq_bits(term(f.terms[0]), term(f.terms[1]));
      case Formula::Kind::Pred:
        throw Error(Errc::UnknownSymbol, "predicate " + f.symbol + " has no meaning in the set universe");
      case Formula::Kind::Not: return full & ~eval(f.subs[0]);
      case Formula::Kind::And: {
        Mask l = eval(f.subs[0]);
        return l == 0 ? 0 : l & eval(f.subs[1]);
      }
      case Formula::Kind::Or: {
        Mask l = eval(f.subs[0]);
        return l == full ? full : l | eval(f.subs[1]);
      }
      case Formula::Kind::Imp: {
        Mask l = eval(f.subs[0]);
        return l == 0 ? full : (full & ~l) | eval(f.subs[1]);
      }
      case Formula::Kind::BoundedForall:
      case Formula::Kind::BoundedExists: {
        const bool universal = f.kind == Formula::Kind::BoundedForall;
        const SetId z = term(f.bound());
        // Copy: evaluating the body may intern new sets and move the arena.
        const std::vector<Entry> dom(u_.entries(z).begin(), u_.entries(z).end());
        Mask acc = universal ? full : 0;
        for (const Entry& e : dom) {
          if (e.value == 0) continue;
          env_.push(f.symbol, e.child);
          const Mask body = eval(f.body());
          env_.pop();
          if (universal)
            acc &= (full & ~e.value) | body;
          else
            acc |= e.value & body;
          if (acc == (universal ? 0 : full)) break;
        }
        return acc;
      }
      case Formula::Kind::CarrierForall:
      case Formula::Kind::CarrierExists: {
        if (carrier_ == nullptr)
          throw Error(Errc::UnboundedQuantifier,
                      "quantifier over " + f.symbol + " ranges over the whole universe; bound it or supply a fragment");
        const bool universal = f.kind == Formula::Kind::CarrierForall;
        Mask acc = universal ? full : 0;
        for (SetId t : *carrier_) {
          env_.push(f.symbol, t);
          const Mask body = eval(f.body());
          env_.pop();
          acc = universal ? acc & body : acc | body;
          if (acc == (universal ? 0 : full)) break;
        }
        return acc;
      }
    }
    return 0;
  }

 private:
  SetId term(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Var:
      case Term::Kind::Const: {
        if (auto v = env_.lookup(t.name)) return *v;
        throw Error(Errc::UnboundVariable, "no value for " + t.name);
      }
      case Term::Kind::App:
        if (t.name == "pair" && t.args.size() == 2) return u_.pair(term(t.args[0]), term(t.args[1]));
        throw Error(Errc::UnknownSymbol, "function " + t.name + " has no meaning in the set universe");
    }
    return 0;
  }

  Universe& u_;
  Env env_;
  const Fragment* carrier_;
};

class ClassicalEvaluator {
 public:
  explicit ClassicalEvaluator(const HFAssignment& a) : base_(a) {}

  bool eval(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::Mem: return term(f.terms[1]).contains(term(f.terms[0]));
      case Formula::Kind::Eq: return term(f.terms[0]) == term(f.terms[1]);
      case Formula::Kind::Pred: throw Error(Errc::UnknownSymbol, "predicate " + f.symbol + " has no classical meaning");
      case Formula::Kind::Not: return !eval(f.subs[0]);
      case Formula::Kind::And: return eval(f.subs[0]) && eval(f.subs[1]);
      case Formula::Kind::Or: return eval(f.subs[0]) || eval(f.subs[1]);
      case Formula::Kind::Imp: return !eval(f.subs[0]) || eval(f.subs[1]);
      case Formula::Kind::BoundedForall:
      case Formula::Kind::BoundedExists: {
        const bool universal = f.kind == Formula::Kind::BoundedForall;
        const HFSet z = term(f.bound());
        for (const HFSet& m : z.members()) {
          stack_.emplace_back(&f.symbol, m);
          const bool body = eval(f.body());
          stack_.pop_back();
          if (body != universal) return !universal;
        }
        return universal;
      }
      case Formula::Kind::CarrierForall:
      case Formula::Kind::CarrierExists:
        throw Error(Errc::NotRestricted, "classical evaluation needs bounded quantifiers");
    }
    return false;
  }

 private:
  HFSet term(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Var:
      case Term::Kind::Const: {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
          if (*it->first == t.name) return it->second;
        if (auto it = base_.find(t.name); it != base_.end()) return it->second;
        throw Error(Errc::UnboundVariable, "no value for " + t.name);
      }
      case Term::Kind::App:
        if (t.name == "pair" && t.args.size() == 2) return HFSet::kpair(term(t.args[0]), term(t.args[1]));
        throw Error(Errc::UnknownSymbol, "function " + t.name + " has no classical meaning");
    }
    return {};
  }

  const HFAssignment& base_;
  std::vector<std::pair<const std::string*, HFSet>> stack_;
};

}  // namespace

Elem eval_bv(Universe& u, const Formula& f, const Assignment& a, const Fragment* carrier) {
  for (const auto& [var, id] : a)
    if (id >= u.size()) throw Error(Errc::BadSpec, "assignment of " + var + " names an unknown set");
  BvEvaluator ev(u, a, carrier);
  return u.elem(ev.eval(f));
}

bool eval_classical(const Formula& f, const HFAssignment& a) {
  ClassicalEvaluator ev(a);
  return ev.eval(f);
}

LosReport check_los(Universe& u, const Formula& f, const Assignment& a) {
  LosReport r;
  r.truth = eval_bv(u, f, a);
  const int atoms = u.algebra().atom_count();
  r.per_atom.resize(static_cast<std::size_t>(atoms));
  for (int q = 0; q < atoms; ++q) {
    HFAssignment fiber;
    for (const auto& [var, id] : a) fiber.emplace(var, u.collapse(q, id));
    const bool sat = eval_classical(f, fiber);
    r.per_atom[static_cast<std::size_t>(q)] = sat;
    if (sat) r.satisfied |= Mask{1} << q;
    if (sat != (((r.truth.bits >> q) & 1U) != 0)) r.violating_atoms.push_back(q);
  }
  r.holds = r.violating_atoms.empty();
  return r;
}

TransferReport check_restricted_transfer(Universe& u, const Formula& f, const HFAssignment& hf_args) {
  if (!is_restricted(f)) throw Error(Errc::NotRestricted, to_string(f));
  TransferReport r;
  r.classical = eval_classical(f, hf_args);
  Assignment names;
  for (const auto& [var, h] : hf_args) names.emplace(var, u.name(h));
  r.boolean = eval_bv(u, f, names);
  r.holds = r.classical == r.boolean.is_one();
  return r;
}

MaxWitness find_max_witness(Universe& u, const Formula& f, const std::string& var, Assignment rest,
                            const Fragment& fragment) {
  if (fragment.empty()) throw Error(Errc::EmptyFragment, "maximum over an empty fragment");
  const Mask full = u.algebra().full_mask();
  MaxWitness w;
  Mask value = 0;
  Mask remaining = full;
  for (SetId x : fragment) {
    rest[var] = x;
    const Mask v = eval_bv(u, f, rest).bits;
    value |= v;
    if (const Mask block = v & remaining; block != 0) {
      w.blocks.push_back(u.elem(block));
      w.pieces.push_back(x);
      remaining &= ~block;
    }
  }
  // Wherever nothing holds, any member will do.
  if (remaining != 0 || w.pieces.empty()) {
    w.blocks.push_back(u.elem(remaining));
    w.pieces.push_back(fragment[0]);
  }
  w.value = u.elem(value);
  w.witness = u.canonicalize(u.mix(w.blocks, w.pieces));
  return w;
}

const Formula& ordinal_formula() {
  static const Formula f = parse_formula(
      "(forall u in x . forall v in u . v in x) /\\ "
      "(forall u in x . forall v in x . u in v \\/ u = v \\/ v in u)");
  return f;
}

OrdinalReport ordinal_ops(Universe& u, SetId x, std::optional<int> rank_bound) {
  OrdinalReport r;
  r.truth = eval_bv(u, ordinal_formula(), {{"x", x}});
  if (!r.truth.is_one()) return r;
  const int bound = rank_bound.value_or(u.rank(x) + 1);
  std::vector<Elem> blocks;
  std::vector<SetId> names;
  for (int k = 0; k < bound; ++k) {
    const SetId alpha = u.name(HFSet::ordinal(k));
    const Elem b = u.truth_eq(x, alpha);
    if (b.is_zero()) continue;
    blocks.push_back(b);
    names.push_back(alpha);
    r.ordinals.push_back(k);
  }
  if (!is_partition(u.algebra(), blocks) || !u.truth_eq(x, u.mix(blocks, names)).is_one())
    throw Error(Errc::SearchExhausted, "no ordinal decomposition below rank " + std::to_string(bound));
  r.blocks = std::move(blocks);
  return r;
}

HFSet element_code(const Elem& b) {
  std::vector<HFSet> members;
  for (Mask m = b.bits; m != 0; m &= m - 1) members.push_back(HFSet::ordinal(std::countr_zero(m)));
  return HFSet(std::move(members));
}

SetId psi_rho(Universe& u, const Hom& rho) {
  const BoolAlg& alg = u.algebra();
  if (!rho.is_automorphism() || rho.source_id() != alg.id())
    throw Error(Errc::NotAutomorphism, "psi needs an automorphism of the universe's algebra");
  std::vector<Entry> es;
  for (const Elem& b : alg.elements()) es.push_back({u.name(element_code(b)), rho(b).bits});
  return u.make_bits(std::move(es));
}

const Formula& ultrafilter_formula() {
  static const Formula f = parse_formula(
      "(forall s in psi . s in bb) /\\ ~(zero in psi) /\\ "
      "(forall a in bb . forall b in bb . a in psi /\\ pair(a,b) in le -> b in psi) /\\ "
      "(forall a in bb . forall b in bb . forall c in bb . "
      "a in psi /\\ b in psi /\\ pair(pair(a,b),c) in meet -> c in psi) /\\ "
      "(forall a in bb . forall c in bb . pair(a,c) in cmp -> a in psi \\/ c in psi)");
  return f;
}

Assignment ultrafilter_assignment(Universe& u, SetId psi) {
  const BoolAlg& alg = u.algebra();
  const auto elems = alg.elements();
  std::vector<HFSet> codes, le, meet_graph, cmp;
  for (const Elem& a : elems) {
    const HFSet ca = element_code(a);
    codes.push_back(ca);
    cmp.push_back(HFSet::kpair(ca, element_code(complement(a))));
    for (const Elem& b : elems) {
      const HFSet cb = element_code(b);
      if (leq(a, b)) le.push_back(HFSet::kpair(ca, cb));
      meet_graph.push_back(HFSet::kpair(HFSet::kpair(ca, cb), element_code(meet(a, b))));
    }
  }
  return {{"psi", psi},
          {"bb", u.name(HFSet(codes))},
          {"le", u.name(HFSet(le))},
          {"meet", u.name(HFSet(meet_graph))},
          {"cmp", u.name(HFSet(cmp))},
          {"zero", u.name(element_code(alg.zero()))}};
}

}  // namespace bvm
