#include "bvm/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace bvm {

bool operator==(const Term& a, const Term& b) { return a.kind == b.kind && a.name == b.name && a.args == b.args; }

bool operator==(const Formula& a, const Formula& b) {
  return a.kind == b.kind && a.symbol == b.symbol && a.terms == b.terms && a.subs == b.subs;
}

namespace fm {

namespace {
Formula node(Formula::Kind kind, std::string symbol, std::vector<Term> terms, std::vector<Formula> subs) {
  Formula f;
  f.kind = kind;
  f.symbol = std::move(symbol);
  f.terms = std::move(terms);
  f.subs = std::move(subs);
  return f;
}
}  // namespace

Formula mem(Term a, Term b) { return node(Formula::Kind::Mem, "", {std::move(a), std::move(b)}, {}); }
Formula eq(Term a, Term b) { return node(Formula::Kind::Eq, "", {std::move(a), std::move(b)}, {}); }
Formula pred(std::string symbol, std::vector<Term> args) {
  return node(Formula::Kind::Pred, std::move(symbol), std::move(args), {});
}
Formula neg(Formula f) { return node(Formula::Kind::Not, "", {}, {std::move(f)}); }
Formula conj(Formula a, Formula b) { return node(Formula::Kind::And, "", {}, {std::move(a), std::move(b)}); }
Formula disj(Formula a, Formula b) { return node(Formula::Kind::Or, "", {}, {std::move(a), std::move(b)}); }
Formula imp(Formula a, Formula b) { return node(Formula::Kind::Imp, "", {}, {std::move(a), std::move(b)}); }
Formula forall_in(std::string var, Term bound, Formula body) {
  return node(Formula::Kind::BoundedForall, std::move(var), {std::move(bound)}, {std::move(body)});
}
Formula exists_in(std::string var, Term bound, Formula body) {
  return node(Formula::Kind::BoundedExists, std::move(var), {std::move(bound)}, {std::move(body)});
}
Formula forall(std::string var, Formula body) {
  return node(Formula::Kind::CarrierForall, std::move(var), {}, {std::move(body)});
}
Formula exists(std::string var, Formula body) {
  return node(Formula::Kind::CarrierExists, std::move(var), {}, {std::move(body)});
}

}  // namespace fm

Signature Signature::set_theory() {
  Signature s;
  s.function("pair", 2);
  return s;
}

Signature& Signature::function(std::string name, int arity) {
  if (arity < 0) throw Error(Errc::BadSpec, "negative arity for " + name);
  functions_[std::move(name)] = arity;
  return *this;
}

Signature& Signature::predicate(std::string name, int arity) {
  if (arity < 0) throw Error(Errc::BadSpec, "negative arity for " + name);
  predicates_[std::move(name)] = arity;
  return *this;
}

int Signature::function_arity(std::string_view name) const {
  auto it = functions_.find(std::string(name));
  if (it == functions_.end()) throw Error(Errc::UnknownSymbol, "no function symbol " + std::string(name));
  return it->second;
}

int Signature::predicate_arity(std::string_view name) const {
  auto it = predicates_.find(std::string(name));
  if (it == predicates_.end()) throw Error(Errc::UnknownSymbol, "no predicate symbol " + std::string(name));
  return it->second;
}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Not, And, Or, Imp, Eq, Forall, Exists, In, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::string_view tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Not: return "'~'";
    case Tok::And: return "'/\\'";
    case Tok::Or: return "'\\/'";
    case Tok::Imp: return "'->'";
    case Tok::Eq: return "'='";
    case Tok::Forall: return "'forall'";
    case Tok::Exists: return "'exists'";
    case Tok::In: return "'in'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const SourcePos start = pos;
    auto two = [&](std::string_view s) { return text.substr(i, 2) == s; };
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string word(text.substr(i, j - i));
      Tok kind = word == "forall" ? Tok::Forall : word == "exists" ? Tok::Exists : word == "in" ? Tok::In : Tok::Ident;
      out.push_back({kind, std::move(word), start});
      advance(j - i);
    } else if (two("/\\")) {
      out.push_back({Tok::And, "/\\", start});
      advance(2);
    } else if (two("\\/")) {
      out.push_back({Tok::Or, "\\/", start});
      advance(2);
    } else if (two("->")) {
      out.push_back({Tok::Imp, "->", start});
      advance(2);
    } else {
      Tok kind;
      switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case ',': kind = Tok::Comma; break;
        case '.': kind = Tok::Dot; break;
        case '~': kind = Tok::Not; break;
        case '=': kind = Tok::Eq; break;
        default: throw ParseError(Errc::SyntaxError, start, std::string("unexpected character '") + c + "'");
      }
      out.push_back({kind, std::string(1, c), start});
      advance(1);
    }
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature& sig) : toks_(std::move(toks)), sig_(sig) {}

  Formula parse_all() {
    Formula f = parse_imp();
    expect(Tok::End);
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool accept(Tok t) {
    if (peek().kind != t) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok t) {
    if (peek().kind != t)
      throw ParseError(Errc::SyntaxError, peek().pos,
                       "expected " + std::string(tok_name(t)) + ", found " + std::string(tok_name(peek().kind)));
    return toks_[pos_++];
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (peek().kind == Tok::Imp) {
      const SourcePos at = peek().pos;
      ++pos_;
      Formula f = fm::imp(std::move(lhs), parse_imp());
      f.pos = at;
      return f;
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (peek().kind == Tok::Or) {
      const SourcePos at = peek().pos;
      ++pos_;
      lhs = fm::disj(std::move(lhs), parse_and());
      lhs.pos = at;
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (peek().kind == Tok::And) {
      const SourcePos at = peek().pos;
      ++pos_;
      lhs = fm::conj(std::move(lhs), parse_unary());
      lhs.pos = at;
    }
    return lhs;
  }

  Formula parse_unary() {
    const SourcePos at = peek().pos;
    if (accept(Tok::Not)) {
      Formula f = fm::neg(parse_unary());
      f.pos = at;
      return f;
    }
    if (peek().kind == Tok::Forall || peek().kind == Tok::Exists) return parse_quantifier();
    return parse_primary();
  }

  Formula parse_quantifier() {
    const SourcePos at = peek().pos;
    const bool universal = toks_[pos_++].kind == Tok::Forall;
    std::string var = expect(Tok::Ident).text;
    std::optional<Term> bound;
    if (accept(Tok::In)) bound = parse_term();
    expect(Tok::Dot);
    if (peek().kind == Tok::End) throw ParseError(Errc::SyntaxError, peek().pos, "quantifier without a body");
    Formula body = parse_imp();
    Formula f = bound ? (universal ? fm::forall_in(std::move(var), std::move(*bound), std::move(body))
                                   : fm::exists_in(std::move(var), std::move(*bound), std::move(body)))
                      : (universal ? fm::forall(std::move(var), std::move(body))
                                   : fm::exists(std::move(var), std::move(body)));
    f.pos = at;
    return f;
  }

  Formula parse_primary() {
    const SourcePos at = peek().pos;
    if (accept(Tok::LParen)) {
      Formula f = parse_imp();
      expect(Tok::RParen);
      return f;
    }
    if (peek().kind == Tok::Ident && sig_.has_predicate(peek().text)) {
      std::string symbol = toks_[pos_++].text;
      const int arity = sig_.predicate_arity(symbol);
      std::vector<Term> args;
      if (arity > 0 || peek().kind == Tok::LParen) args = parse_args();
      if (static_cast<int>(args.size()) != arity)
        throw ParseError(Errc::ArityError, at,
                         symbol + " expects " + std::to_string(arity) + " arguments, got " + std::to_string(args.size()));
      Formula f = fm::pred(std::move(symbol), std::move(args));
      f.pos = at;
      return f;
    }
    Term lhs = parse_term();
    Formula f;
    if (accept(Tok::In)) {
      f = fm::mem(std::move(lhs), parse_term());
    } else if (accept(Tok::Eq)) {
      f = fm::eq(std::move(lhs), parse_term());
    } else {
      throw ParseError(Errc::SyntaxError, peek().pos,
                       "expected 'in' or '=', found " + std::string(tok_name(peek().kind)));
    }
    f.pos = at;
    return f;
  }

  std::vector<Term> parse_args() {
    std::vector<Term> args;
    expect(Tok::LParen);
    if (accept(Tok::RParen)) return args;
    do {
      args.push_back(parse_term());
    } while (accept(Tok::Comma));
    expect(Tok::RParen);
    return args;
  }

  Term parse_term() {
    const Token& tok = expect(Tok::Ident);
    const SourcePos at = tok.pos;
    std::string name = tok.text;
    Term t;
    if (peek().kind == Tok::LParen) {
      if (!sig_.has_function(name)) throw ParseError(Errc::UnknownSymbol, at, "unknown function symbol " + name);
      const int arity = sig_.function_arity(name);
      auto args = parse_args();
      if (static_cast<int>(args.size()) != arity)
        throw ParseError(Errc::ArityError, at,
                         name + " expects " + std::to_string(arity) + " arguments, got " + std::to_string(args.size()));
      t = arity == 0 ? Term::constant(std::move(name)) : Term::app(std::move(name), std::move(args));
    } else if (sig_.has_function(name)) {
      if (sig_.function_arity(name) != 0)
        throw ParseError(Errc::ArityError, at, name + " needs arguments");
      t = Term::constant(std::move(name));
    } else {
      t = Term::var(std::move(name));
    }
    t.pos = at;
    return t;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Imp: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Not: return 4;
    case Formula::Kind::BoundedForall:
    case Formula::Kind::BoundedExists:
    case Formula::Kind::CarrierForall:
    case Formula::Kind::CarrierExists: return 0;
    default: return 5;
  }
}

void print(const Formula& f, int ctx, std::string& out) {
  const int prec = precedence(f.kind);
  const bool wrap = prec < ctx;
  if (wrap) out += '(';
  switch (f.kind) {
    case Formula::Kind::Mem:
      out += to_string(f.terms[0]) + " in " + to_string(f.terms[1]);
      break;
    case Formula::Kind::Eq:
      out += to_string(f.terms[0]) + " = " + to_string(f.terms[1]);
      break;
    case Formula::Kind::Pred:
      out += f.symbol;
      if (!f.terms.empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
          if (i != 0) out += ',';
          out += to_string(f.terms[i]);
        }
        out += ')';
      }
      break;
    case Formula::Kind::Not:
      out += '~';
      print(f.subs[0], 4, out);
      break;
    case Formula::Kind::And:
      print(f.subs[0], 3, out);
      out += " /\\ ";
      print(f.subs[1], 4, out);
      break;
    case Formula::Kind::Or:
      print(f.subs[0], 2, out);
      out += " \\/ ";
      print(f.subs[1], 3, out);
      break;
    case Formula::Kind::Imp:
      print(f.subs[0], 2, out);
      out += " -> ";
      print(f.subs[1], 1, out);
      break;
    case Formula::Kind::BoundedForall:
    case Formula::Kind::BoundedExists:
    case Formula::Kind::CarrierForall:
    case Formula::Kind::CarrierExists: {
      const bool universal = f.kind == Formula::Kind::BoundedForall || f.kind == Formula::Kind::CarrierForall;
      out += universal ? "forall " : "exists ";
      out += f.symbol;
      if (f.is_bounded()) out += " in " + to_string(f.bound());
      out += " . ";
      print(f.body(), 0, out);
      break;
    }
  }
  if (wrap) out += ')';
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto term_vars = [&](const Term& t, auto&& self) -> void {
    if (t.kind == Term::Kind::Var) {
      if (!bound.count(t.name)) out.insert(t.name);
      return;
    }
    for (const auto& a : t.args) self(a, self);
  };
  if (f.is_quantifier()) {
    if (f.is_bounded()) term_vars(f.bound(), term_vars);
    const bool fresh = bound.insert(f.symbol).second;
    collect_free(f.body(), bound, out);
    if (fresh) bound.erase(f.symbol);
    return;
  }
  for (const auto& t : f.terms) term_vars(t, term_vars);
  for (const auto& s : f.subs) collect_free(s, bound, out);
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) { return Parser(lex(text), sig).parse_all(); }

std::string to_string(const Term& t) {
  if (t.kind != Term::Kind::App) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i != 0) out += ',';
    out += to_string(t.args[i]);
  }
  return out + ")";
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

bool is_restricted(const Formula& f) {
  if (f.kind == Formula::Kind::CarrierForall || f.kind == Formula::Kind::CarrierExists) return false;
  return std::all_of(f.subs.begin(), f.subs.end(), [](const Formula& s) { return is_restricted(s); });
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::size_t depth(const Formula& f) {
  std::size_t d = 0;
  for (const auto& s : f.subs) d = std::max(d, depth(s));
  return f.subs.empty() ? 0 : d + 1;
}

}  // namespace bvm
