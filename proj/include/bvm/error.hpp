#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bvm {

enum class Errc {
  AlgebraMismatch,
  BadSpec,
  LengthMismatch,
  NotAutomorphism,
  CapExceeded,
  SearchExhausted,
  SyntaxError,
  UnknownSymbol,
  ArityError,
  UnboundedQuantifier,
  UnboundVariable,
  NotRestricted,
  EmptyFragment,
  NotExtensional,
  NotAFunction,
  RankInsufficient,
  MetricAxiomViolation,
  MemNotInSignature,
  SignatureMismatch,
  NotBoolean,
  InternalInconsistency,
  SizeOverflow,
  ScriptError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// that scripts and tests can branch on the kind rather than the text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bvm
