#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bvm/error.hpp"

namespace bvm {

struct SourcePos {
  int line = 1;
  int column = 1;
};

struct Term {
  enum class Kind { Var, Const, App };

  Kind kind = Kind::Var;
  std::string name;
  std::vector<Term> args;
  SourcePos pos;

  static Term var(std::string name) { return {Kind::Var, std::move(name), {}, {}}; }
  static Term constant(std::string symbol) { return {Kind::Const, std::move(symbol), {}, {}}; }
  static Term app(std::string symbol, std::vector<Term> args) { return {Kind::App, std::move(symbol), std::move(args), {}}; }

  /// Structural equality; positions are ignored.
  friend bool operator==(const Term& a, const Term& b);
};

struct Formula {
  enum class Kind { Mem, Eq, Pred, Not, And, Or, Imp, BoundedForall, BoundedExists, CarrierForall, CarrierExists };

  Kind kind = Kind::Eq;
  /// Predicate symbol, or the bound variable of a quantifier.
  std::string symbol;
  /// Atomic arguments; for bounded quantifiers the single bound term.
  std::vector<Term> terms;
  std::vector<Formula> subs;
  SourcePos pos;

  friend bool operator==(const Formula& a, const Formula& b);

  bool is_quantifier() const noexcept { return kind >= Kind::BoundedForall; }
  bool is_bounded() const noexcept { return kind == Kind::BoundedForall || kind == Kind::BoundedExists; }
  const Formula& body() const { return subs.front(); }
  const Term& bound() const { return terms.front(); }
};

namespace fm {

Formula mem(Term a, Term b);
Formula eq(Term a, Term b);
Formula pred(std::string symbol, std::vector<Term> args);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula imp(Formula a, Formula b);
Formula forall_in(std::string var, Term bound, Formula body);
Formula exists_in(std::string var, Term bound, Formula body);
Formula forall(std::string var, Formula body);
Formula exists(std::string var, Formula body);

}  // namespace fm

/// Function and predicate symbols with their arities. The set-theory
/// signature carries the built-in `pair/2` (internal Kuratowski pair).
class Signature {
 public:
  static Signature set_theory();

  Signature& function(std::string name, int arity);
  Signature& predicate(std::string name, int arity);

  bool has_function(std::string_view name) const { return functions_.count(std::string(name)) != 0; }
  bool has_predicate(std::string_view name) const { return predicates_.count(std::string(name)) != 0; }
  int function_arity(std::string_view name) const;
  int predicate_arity(std::string_view name) const;
  const std::map<std::string, int>& functions() const noexcept { return functions_; }
  const std::map<std::string, int>& predicates() const noexcept { return predicates_; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int> functions_;
  std::map<std::string, int> predicates_;
};

/// Error carrying the 1-based source position of the offending token.
class ParseError : public Error {
 public:
  ParseError(Errc code, SourcePos pos, const std::string& msg)
      : Error(code, "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ": " + msg),
        pos_(pos) {}
  SourcePos pos() const noexcept { return pos_; }

 private:
  SourcePos pos_;
};

/// Grammar (loosest first): `F -> F` (right-assoc), `F \/ F`, `F /\ F`, `~F`,
/// `forall V [in T] . F`, `exists V [in T] . F`, `(F)`, `T in T`, `T = T`,
/// `P(T,...)`. Terms are variables, 0-ary function constants, or `f(T,...)`.
Formula parse_formula(std::string_view text, const Signature& sig = Signature::set_theory());

std::string to_string(const Term& t);
std::string to_string(const Formula& f);

/// True iff every quantifier is bounded by a term.
bool is_restricted(const Formula& f);
std::set<std::string> free_variables(const Formula& f);
std::size_t depth(const Formula& f);

}  // namespace bvm
