#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvm/formula.hpp"
#include "bvm/universe.hpp"

namespace bvm {

using Assignment = std::map<std::string, SetId>;
using HFAssignment = std::map<std::string, HFSet>;

/// Boolean truth value of `f`. Connectives map to the algebra operations,
/// atoms to the universe's memoized [[x = y]] and [[x in y]], and a bounded
/// quantifier over z ranges over dom(z) weighted by z(t). Quantifiers over
/// the whole universe are rejected unless a finite `carrier` is supplied, in
/// which case they range over it.
Elem eval_bv(Universe& u, const Formula& f, const Assignment& a, const Fragment* carrier = nullptr);

/// Ordinary satisfaction over hereditarily finite sets.
bool eval_classical(const Formula& f, const HFAssignment& a);

struct LosReport {
  Elem truth;
  /// Atoms whose collapsed assignment satisfies f classically.
  Mask satisfied = 0;
  std::vector<bool> per_atom;
  std::vector<int> violating_atoms;
  bool holds = false;
};

/// Compares [[f]] with the join of the atoms whose fiber satisfies f.
LosReport check_los(Universe& u, const Formula& f, const Assignment& a);

struct TransferReport {
  bool classical = false;
  Elem boolean;
  bool holds = false;
};

/// Restricted formulas hold of HF sets iff they hold with value one of their
/// standard names. Throws NotRestricted otherwise.
TransferReport check_restricted_transfer(Universe& u, const Formula& f, const HFAssignment& hf_args);

struct MaxWitness {
  SetId witness = 0;
  Elem value;
  std::vector<Elem> blocks;
  std::vector<SetId> pieces;
};

/// Fragment-relative maximum: value is the join of [[f(x)]] over the
/// fragment, and the witness is mixed greedily from the fragment members
/// that contribute, so [[f(witness)]] equals the value.
MaxWitness find_max_witness(Universe& u, const Formula& f, const std::string& var, Assignment rest,
                            const Fragment& fragment);

/// Transitive and linearly ordered by membership.
const Formula& ordinal_formula();

struct OrdinalReport {
  Elem truth;
  /// Present when truth is one: blocks b_k with x = mix(b_k * k^).
  std::optional<std::vector<Elem>> blocks;
  std::vector<int> ordinals;
};

/// Evaluates Ord(x) and, when it holds with value one, decomposes x as a
/// mixing of standard ordinals below `rank_bound` (defaults to rank(x)+1).
/// Throws SearchExhausted if no decomposition exists within the bound.
OrdinalReport ordinal_ops(Universe& u, SetId x, std::optional<int> rank_bound = std::nullopt);

/// HF code of an algebra element: the set of von Neumann indices of its atoms.
HFSet element_code(const Elem& b);

/// The set {(b^, rho(b)) : b in B}. Throws NotAutomorphism.
SetId psi_rho(Universe& u, const Hom& rho);

/// Bounded formula stating that `psi` is an ultrafilter on the name `bb` of
/// the coded algebra, with the order, meet and complement graphs passed as
/// the names `le`, `meet`, `cmp` and the code of zero as `zero`.
const Formula& ultrafilter_formula();

/// Assignment for ultrafilter_formula with psi bound to `psi`.
Assignment ultrafilter_assignment(Universe& u, SetId psi);

}  // namespace bvm
