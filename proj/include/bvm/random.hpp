#pragma once

#include <random>
#include <string>
#include <vector>

#include "bvm/bsets.hpp"
#include "bvm/formula.hpp"
#include "bvm/posets.hpp"
#include "bvm/universe.hpp"

namespace bvm {

using Rng = std::mt19937_64;

struct FormulaShape {
  /// Free variables the formula may mention.
  std::vector<std::string> free;
  int max_depth = 4;
  /// Chance that an atomic term is an internal pair instead of a variable.
  double pair_chance = 0.0;
};

/// A random set-theoretic formula whose quantifiers are all bounded.
Formula random_restricted_formula(Rng& rng, const FormulaShape& shape);

/// A random formula over a system signature: carrier quantifiers, equality,
/// the signature's predicates and operations, and the given constants.
Formula random_system_formula(Rng& rng, const Signature& sig, const std::vector<std::string>& free,
                              const std::vector<std::string>& constants, int max_depth);

/// A random set of rank below `rank` whose entries carry arbitrary values;
/// not canonicalized.
SetId random_set(Universe& u, Rng& rng, int rank, int max_width = 3);

/// A random element of the algebra.
Elem random_elem(const BoolAlg& alg, Rng& rng);

/// A random partition of unity with at most `blocks` members, none zero.
std::vector<Elem> random_partition(const BoolAlg& alg, Rng& rng, int blocks);

/// A random B-metric: each atom splits the carrier into random classes, and
/// every pair of points is split by some atom.
BSet random_bset(const BoolAlg& alg, Rng& rng, int points);

/// A random order with bottom on `size` points.
FinPoset random_poset(Rng& rng, int size, double edge_chance = 0.3);

}  // namespace bvm
