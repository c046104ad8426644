#include "bvm/session.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>

#include "bvm/arrows.hpp"
#include "bvm/evaluator.hpp"
#include "bvm/random.hpp"
#include "bvm/suites.hpp"

namespace bvm {

using json = nlohmann::ordered_json;

ScriptError::ScriptError(int line, int column, const std::string& msg)
    : Error(Errc::ScriptError,
            "line " + std::to_string(line) + (column > 0 ? ", column " + std::to_string(column) : "") + ": " + msg),
      line_(line),
      column_(column),
      message_(msg) {}

json elem_json(const BoolAlg& alg, const Elem& e) {
  json out = json::array();
  for (int i : alg.atoms_of(e)) out.push_back(alg.atom_name(i));
  return out;
}

json dump_json(const Universe& u, SetId x) {
  std::set<SetId> seen;
  std::vector<SetId> todo{x};
  while (!todo.empty()) {
    const SetId y = todo.back();
    todo.pop_back();
    if (!seen.insert(y).second) continue;
    for (const Entry& e : u.entries(y)) todo.push_back(e.child);
  }
  json sets = json::object();
  for (SetId y : seen) {
    json row = json::object();
    for (const Entry& e : u.entries(y)) row[std::to_string(e.child)] = elem_json(u.algebra(), u.elem(e.value));
    sets[std::to_string(y)] = std::move(row);
  }
  return json{{"root", x}, {"sets", std::move(sets)}};
}

namespace {

struct Token {
  std::string text;
  bool quoted = false;
  int column = 1;
};

// Words end at whitespace outside brackets; a double-quoted string is one
// token. A word starting with '#' not followed by a digit starts a comment.
std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    const int column = static_cast<int>(i) + 1;
    if (s[i] == '#' && (i + 1 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1])))) break;
    if (s[i] == '"') {
      const auto close = s.find('"', i + 1);
      if (close == std::string_view::npos) throw ScriptError(0, column, "unterminated string");
      out.push_back({std::string(s.substr(i + 1, close - i - 1)), true, column});
      i = close + 1;
      continue;
    }
    int depth = 0;
    const std::size_t start = i;
    for (; i < s.size(); ++i) {
      const char c = s[i];
      if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) break;
      if (c == '{' || c == '[' || c == '(') ++depth;
      if (c == '}' || c == ']' || c == ')') {
        if (--depth < 0) throw ScriptError(0, static_cast<int>(i) + 1, "unbalanced bracket");
      }
    }
    if (depth != 0) throw ScriptError(0, column, "unbalanced bracket");
    out.push_back({std::string(s.substr(start, i - start)), false, column});
  }
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// Splits on `sep` outside brackets; empty input gives no pieces.
std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '{' || c == '[' || c == '(') ++depth;
    if (c == '}' || c == ']' || c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

std::string strip(std::string_view s, char open, char close) {
  const std::string t = trim(s);
  if (t.size() < 2 || t.front() != open || t.back() != close)
    throw Error(Errc::SyntaxError, std::string("expected ") + open + "..." + close + ", got '" + t + "'");
  return t.substr(1, t.size() - 2);
}

int to_int(std::string_view s) {
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) throw Error(Errc::SyntaxError, "expected a number, got '" + std::string(s) + "'");
  return v;
}

std::string join_texts(const std::vector<Token>& toks, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < toks.size(); ++i) {
    if (i > from) out += ' ';
    out += toks[i].text;
  }
  return out;
}

json per_atom_json(const BoolAlg& alg, Mask bits) {
  json out = json::object();
  for (int q = 0; q < alg.atom_count(); ++q) out[alg.atom_name(q)] = ((bits >> q) & 1U) != 0;
  return out;
}

std::string pass_text(bool ok) { return ok ? "pass" : "FAIL"; }

}  // namespace

struct Session::State {
  explicit State(const SessionOptions& o) : opts(o), rng(o.seed) {}

  const SessionOptions& opts;
  std::unique_ptr<Universe> u;
  std::string algebra_name = "B";
  std::map<std::string, HFSet> hf;
  std::map<std::string, SetId> sets;
  std::map<std::string, BSet> bsets;
  std::set<std::string> symmdiff_bsets;
  std::map<std::string, BSystem> systems;
  std::map<std::string, FinPoset> posets;
  std::map<int, Fragment> fragments;
  Rng rng;

  // Per-statement scratch.
  std::vector<Token> toks;
  StatementResult* out = nullptr;

  const BoolAlg& alg() const { return u->algebra(); }

  void set_algebra(std::string name, BoolAlg a) {
    u = std::make_unique<Universe>(std::move(a));
    algebra_name = std::move(name);
    sets.clear();
    bsets.clear();
    symmdiff_bsets.clear();
    systems.clear();
    fragments.clear();
  }

  const Fragment& fragment(int rank) {
    auto it = fragments.find(rank);
    if (it != fragments.end()) return it->second;
    return fragments.emplace(rank, enumerate_universe(*u, rank, opts.cap)).first->second;
  }

  // --- token helpers ---

  std::optional<std::string> take_option(const std::string& flag) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].quoted || toks[i].text != flag) continue;
      if (i + 1 >= toks.size()) throw Error(Errc::SyntaxError, flag + " needs a value");
      std::string v = toks[i + 1].text;
      toks.erase(toks.begin() + static_cast<std::ptrdiff_t>(i), toks.begin() + static_cast<std::ptrdiff_t>(i + 2));
      return v;
    }
    return std::nullopt;
  }

  bool take_switch(const std::string& flag) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].quoted || toks[i].text != flag) continue;
      toks.erase(toks.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
    return false;
  }

  std::optional<std::string> take_as() {
    if (toks.size() >= 2 && toks[toks.size() - 2].text == "as" && !toks[toks.size() - 2].quoted) {
      std::string name = toks.back().text;
      toks.resize(toks.size() - 2);
      return name;
    }
    return std::nullopt;
  }

  int rank_option() {
    const auto r = take_option("--rank");
    return r ? to_int(*r) : opts.rank_max;
  }

  const Token& arg(std::size_t i, const char* what) {
    if (i >= toks.size()) throw Error(Errc::SyntaxError, std::string("missing ") + what);
    return toks[i];
  }

  void no_more(std::size_t i) {
    if (i < toks.size()) throw Error(Errc::SyntaxError, "unexpected '" + toks[i].text + "'");
  }

  // `verb NAME = rhs...` in any spacing; returns NAME and leaves the rhs at index 3.
  std::string definition() {
    if (toks.size() >= 2) {
      const std::string& t = toks[1].text;
      const auto eq = t.find('=');
      if (eq != std::string::npos && eq > 0) {
        Token name{t.substr(0, eq), false, toks[1].column};
        Token rest{t.substr(eq + 1), false, toks[1].column + static_cast<int>(eq) + 1};
        toks[1] = {"=", false, toks[1].column + static_cast<int>(eq)};
        if (!rest.text.empty()) toks.insert(toks.begin() + 2, rest);
        toks.insert(toks.begin() + 1, name);
      }
    }
    if (toks.size() >= 3 && toks[2].text.size() > 1 && toks[2].text.front() == '=' && !toks[2].quoted) {
      Token rest{toks[2].text.substr(1), false, toks[2].column + 1};
      toks[2].text = "=";
      toks.insert(toks.begin() + 3, rest);
    }
    if (toks.size() < 4 || toks[2].text != "=") throw Error(Errc::SyntaxError, "expected '" + toks[0].text + " NAME = ...'");
    return toks[1].text;
  }

  // --- value resolution ---

  HFSet resolve_hf(const std::string& text) {
    if (!text.empty() && text.front() == '{') return HFSet::parse(text);
    if (!text.empty() && std::isdigit(static_cast<unsigned char>(text.front()))) return HFSet::ordinal(to_int(text));
    auto it = hf.find(text);
    if (it == hf.end()) throw Error(Errc::UnknownSymbol, "no HF set named '" + text + "'");
    return it->second;
  }

  SetId resolve(const std::string& text) {
    if (text.empty()) throw Error(Errc::SyntaxError, "missing set reference");
    if (text.front() == '^') return u->name(resolve_hf(text.substr(1)));
    if (text.front() == '#') {
      const int id = to_int(std::string_view(text).substr(1));
      if (id < 0 || static_cast<std::size_t>(id) >= u->size()) throw Error(Errc::UnknownSymbol, "no set " + text);
      return static_cast<SetId>(id);
    }
    auto it = sets.find(text);
    if (it == sets.end()) throw Error(Errc::UnknownSymbol, "no set named '" + text + "'");
    return it->second;
  }

  // Collects `var=value` tokens from index `from` on.
  std::vector<std::pair<std::string, std::string>> bindings(std::size_t from) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = from; i < toks.size(); ++i) {
      const auto eq = toks[i].text.find('=');
      if (toks[i].quoted || eq == std::string::npos || eq == 0)
        throw Error(Errc::SyntaxError, "expected var=value, got '" + toks[i].text + "'");
      out.emplace_back(toks[i].text.substr(0, eq), toks[i].text.substr(eq + 1));
    }
    return out;
  }

  // Explicit bindings, then session sets named like the remaining free
  // variables of f.
  Assignment assignment(std::size_t from, const Formula& f) {
    Assignment a;
    for (const auto& [var, ref] : bindings(from)) a[var] = resolve(ref);
    for (const std::string& v : free_variables(f)) {
      auto it = sets.find(v);
      if (!a.count(v) && it != sets.end()) a[v] = it->second;
    }
    return a;
  }

  HFAssignment hf_assignment(std::size_t from, const Formula& f) {
    HFAssignment a;
    for (const auto& [var, ref] : bindings(from)) a[var] = resolve_hf(ref);
    for (const std::string& v : free_variables(f)) {
      auto it = hf.find(v);
      if (!a.count(v) && it != hf.end()) a[v] = it->second;
    }
    return a;
  }

  Formula formula_at(std::size_t i, const Signature& sig = Signature::set_theory()) {
    const Token& t = arg(i, "formula");
    if (!t.quoted) throw Error(Errc::SyntaxError, "formula must be quoted");
    try {
      return parse_formula(t.text, sig);
    } catch (const ParseError& e) {
      // Re-anchor the formula position onto the script line.
      std::string msg = e.what();
      const auto at = msg.find(": ", msg.find("column "));
      if (at != std::string::npos) msg = std::string(errc_name(e.code())) + msg.substr(at);
      throw ScriptError(0, t.column + e.pos().column, msg);
    }
  }

  json set_json(SetId x) const { return json{{"id", x}, {"rank", u->rank(x)}, {"value", u->describe(x)}}; }

  std::string set_text(SetId x) const { return "#" + std::to_string(x) + " = " + u->describe(x); }

  void store_set(const std::string& name, SetId x) {
    sets[name] = x;
    out->json["name"] = name;
  }

  void report(std::string text) { out->text = std::move(text); }

  void check(bool ok) {
    out->check = ok;
    out->json["pass"] = ok;
  }

  // --- statements ---

  void run(const std::string& verb) {
    using Handler = void (State::*)();
    static const std::map<std::string, Handler> handlers{
        {"algebra", &State::st_algebra},     {"hf", &State::st_hf},
        {"name", &State::st_name},           {"set", &State::st_set},
        {"mix", &State::st_mix},             {"ascend", &State::st_ascend},
        {"normalize", &State::st_normalize}, {"canonicalize", &State::st_canonicalize},
        {"dump", &State::st_dump},           {"enumerate", &State::st_enumerate},
        {"eval", &State::st_eval},           {"check", &State::st_check},
        {"maximize", &State::st_maximize},   {"descend", &State::st_descend},
        {"escher-check", &State::st_escher}, {"ordinal", &State::st_ordinal},
        {"psi", &State::st_psi},             {"two-point", &State::st_two_point},
        {"bset", &State::st_bset},           {"cyc", &State::st_cyc},
        {"bsystem", &State::st_bsystem},     {"beval", &State::st_beval},
        {"hom", &State::st_hom},             {"realize", &State::st_realize},
        {"poset", &State::st_poset},         {"complete", &State::st_complete},
        {"refined?", &State::st_refined},
    };
    auto it = handlers.find(verb);
    if (it == handlers.end()) throw Error(Errc::SyntaxError, "unknown statement '" + verb + "'");
    (this->*(it->second))();
  }

  void st_algebra() {
    const std::string name = arg(1, "algebra name").text;
    const std::string& spec = arg(2, "atom count or 'from'").text;
    if (spec == "from") {
      const FinPoset& P = poset(arg(3, "poset name").text);
      no_more(4);
      Completion c = completion(P);
      json bands = json::object();
      for (int p = 0; p < P.size(); ++p) bands[P.label(p)] = elem_json(c.algebra, c.band_of(P, p));
      set_algebra(name, c.algebra);
      out->json["bands"] = std::move(bands);
    } else {
      const int n = to_int(spec);
      std::vector<std::string> names;
      for (std::size_t i = 3; i < toks.size(); ++i) names.push_back(toks[i].text);
      if (!names.empty() && static_cast<int>(names.size()) != n)
        throw Error(Errc::BadSpec, std::to_string(names.size()) + " atom names for " + std::to_string(n) + " atoms");
      set_algebra(name, BoolAlg(n, std::move(names)));
    }
    json atoms = json::array();
    std::string list;
    for (int q = 0; q < alg().atom_count(); ++q) {
      atoms.push_back(alg().atom_name(q));
      list += " " + alg().atom_name(q);
    }
    out->json["algebra"] = name;
    out->json["atoms"] = std::move(atoms);
    report("algebra " + name + ": " + std::to_string(alg().atom_count()) + " atoms" + list);
  }

  void st_hf() {
    const std::string name = definition();
    const HFSet h = resolve_hf(join_texts(toks, 3));
    hf[name] = h;
    out->json["name"] = name;
    out->json["value"] = h.to_string();
    report("hf " + name + " = " + h.to_string());
  }

  void finish_set(const std::string& name, SetId x) {
    store_set(name, x);
    out->json["set"] = set_json(x);
    report(name + ": " + set_text(x));
  }

  void st_name() {
    const std::string name = definition();
    no_more(4);
    finish_set(name, resolve(toks[3].text));
  }

  void st_set() {
    const std::string name = definition();
    no_more(4);
    std::vector<std::pair<SetId, Elem>> entries;
    for (const std::string& item : split_top(strip(toks[3].text, '{', '}'), ',')) {
      const auto parts = split_top(item, ':');
      if (parts.size() != 2) throw Error(Errc::SyntaxError, "expected 'set : value', got '" + item + "'");
      entries.emplace_back(resolve(parts[0]), alg().parse(parts[1]));
    }
    finish_set(name, u->make(entries));
  }

  void st_mix() {
    const std::string name = definition();
    std::vector<Elem> parts;
    std::vector<SetId> xs;
    for (const std::string& item : split_top(join_texts(toks, 3), ',')) {
      const auto kv = split_top(item, ':');
      if (kv.size() != 2) throw Error(Errc::SyntaxError, "expected 'value : set', got '" + item + "'");
      parts.push_back(alg().parse(kv[0]));
      xs.push_back(resolve(kv[1]));
    }
    if (!is_partition(alg(), parts)) throw Error(Errc::BadSpec, "mixing blocks are not a partition of unity");
    finish_set(name, u->mix(parts, xs));
  }

  void st_ascend() {
    const std::string name = definition();
    std::vector<SetId> xs;
    for (const std::string& item : split_top(join_texts(toks, 3), ',')) xs.push_back(resolve(item));
    finish_set(name, u->ascent(xs));
  }

  void unary_set(const std::function<SetId(SetId)>& op) {
    const auto as = take_as();
    const SetId x = resolve(arg(1, "set").text);
    no_more(2);
    const SetId y = op(x);
    if (as) store_set(*as, y);
    out->json["set"] = set_json(y);
    report(toks[1].text + " -> " + set_text(y));
  }

  void st_normalize() {
    unary_set([&](SetId x) { return u->normalize(x); });
  }
  void st_canonicalize() {
    unary_set([&](SetId x) { return u->canonicalize(x); });
  }

  void st_dump() {
    const SetId x = resolve(arg(1, "set").text);
    no_more(2);
    out->json["dump"] = dump_json(*u, x);
    std::string text = "dump " + toks[1].text + ": root #" + std::to_string(x);
    for (const auto& [id, row] : out->json["dump"]["sets"].items()) text += "\n  #" + id + " = " + u->describe(static_cast<SetId>(std::stoul(id)));
    report(text);
  }

  void st_enumerate() {
    const int r = to_int(arg(1, "rank").text);
    no_more(2);
    const Fragment& f = fragment(r);
    out->json["rank"] = r;
    out->json["size"] = f.size();
    report("enumerate " + std::to_string(r) + ": " + std::to_string(f.size()) + " sets");
  }

  void truth_fields(const Elem& truth) {
    out->json["truth"] = elem_json(alg(), truth);
    out->json["per_atom"] = per_atom_json(alg(), truth.bits);
  }

  void st_eval() {
    const auto carrier_rank = take_option("--carrier");
    const Formula f = formula_at(1);
    const Assignment a = assignment(2, f);
    const Elem truth = eval_bv(*u, f, a, carrier_rank ? &fragment(to_int(*carrier_rank)) : nullptr);
    out->json["formula"] = to_string(f);
    truth_fields(truth);
    report("eval " + to_string(f) + ": " + alg().format(truth));
  }

  void st_check() {
    const std::string kind = arg(1, "check kind").text;
    if (kind == "los") {
      const Formula f = formula_at(2);
      const LosReport r = check_los(*u, f, assignment(3, f));
      out->json["formula"] = to_string(f);
      truth_fields(r.truth);
      out->json["satisfied"] = elem_json(alg(), alg().elem(r.satisfied));
      json bad = json::array();
      for (int q : r.violating_atoms) bad.push_back(alg().atom_name(q));
      out->json["violating_atoms"] = std::move(bad);
      check(r.holds);
      report("check los " + to_string(f) + ": " + pass_text(r.holds) + ", truth " + alg().format(r.truth) +
             ", satisfied atoms " + alg().format(alg().elem(r.satisfied)));
    } else if (kind == "transfer") {
      const Formula f = formula_at(2);
      const TransferReport r = check_restricted_transfer(*u, f, hf_assignment(3, f));
      out->json["formula"] = to_string(f);
      out->json["classical"] = r.classical;
      out->json["truth"] = elem_json(alg(), r.boolean);
      check(r.holds);
      report("check transfer " + to_string(f) + ": " + pass_text(r.holds) + ", classical " +
             (r.classical ? "true" : "false") + ", truth " + alg().format(r.boolean));
    } else if (kind == "eval") {
      const auto expect = take_option("--expect");
      if (!expect) throw Error(Errc::SyntaxError, "check eval needs --expect VALUE");
      const auto carrier_rank = take_option("--carrier");
      const Formula f = formula_at(2);
      const Elem want = alg().parse(*expect);
      const Elem truth = eval_bv(*u, f, assignment(3, f), carrier_rank ? &fragment(to_int(*carrier_rank)) : nullptr);
      out->json["formula"] = to_string(f);
      truth_fields(truth);
      out->json["expected"] = elem_json(alg(), want);
      check(truth == want);
      report("check eval " + to_string(f) + ": " + pass_text(truth == want) + ", truth " + alg().format(truth) +
             ", expected " + alg().format(want));
    } else if (kind == "refined") {
      const FinPoset& P = poset(arg(2, "poset name").text);
      no_more(3);
      const RefinedReport r = refined_fields(P);
      const bool ok = r.consistent() && r.separation;
      check(ok);
      report("check refined " + toks[2].text + ": " + pass_text(ok) + refined_text(r));
    } else {
      throw Error(Errc::SyntaxError, "unknown check '" + kind + "'");
    }
    out->verb = "check " + kind;
  }

  void st_maximize() {
    const auto as = take_as();
    const int rank = rank_option();
    const Formula f = formula_at(1);
    const std::string var = arg(2, "variable").text;
    const MaxWitness w = find_max_witness(*u, f, var, [&] {
      Assignment a = assignment(3, f);
      a.erase(var);
      return a;
    }(), fragment(rank));
    if (as) store_set(*as, w.witness);
    out->json["formula"] = to_string(f);
    out->json["variable"] = var;
    out->json["rank"] = rank;
    truth_fields(w.value);
    out->json["witness_id"] = w.witness;
    out->json["witness"] = set_json(w.witness);
    json blocks = json::array();
    for (std::size_t k = 0; k < w.blocks.size(); ++k)
      blocks.push_back(json{{"block", elem_json(alg(), w.blocks[k])}, {"piece", w.pieces[k]}});
    out->json["blocks"] = std::move(blocks);
    report("maximize " + to_string(f) + " over " + var + ": value " + alg().format(w.value) + ", witness " +
           set_text(w.witness));
  }

  void st_descend() {
    const int rank = rank_option();
    const SetId x = resolve(arg(1, "set").text);
    no_more(2);
    const auto members = descent(*u, x, fragment(rank));
    json list = json::array();
    std::string text = "descend " + toks[1].text + ": " + std::to_string(members.size()) + " members in the rank-" +
                       std::to_string(rank) + " fragment";
    for (SetId m : members) {
      list.push_back(set_json(m));
      text += "\n  " + set_text(m);
    }
    out->json["rank"] = rank;
    out->json["members"] = std::move(list);
    report(text);
  }

  void st_escher() {
    const int rank = rank_option();
    const auto samples = take_option("--samples");
    no_more(1);
    const SuiteResult r = escher_check(SuiteOptions{opts.seed}, rank, samples ? to_int(*samples) : 40);
    out->json["rank"] = rank;
    out->json["cases"] = r.cases;
    out->json["failures"] = r.failures;
    out->json["detail"] = r.detail;
    check(r.pass);
    report("escher-check: " + pass_text(r.pass) + ", " + std::to_string(r.cases) + " cases, " + r.detail);
  }

  void st_ordinal() {
    const auto rank = take_option("--rank");
    const SetId x = resolve(arg(1, "set").text);
    no_more(2);
    const OrdinalReport r = ordinal_ops(*u, x, rank ? std::optional<int>(to_int(*rank)) : std::nullopt);
    out->json["truth"] = elem_json(alg(), r.truth);
    std::string text = "ordinal " + toks[1].text + ": Ord truth " + alg().format(r.truth);
    if (r.blocks) {
      json parts = json::array();
      for (std::size_t k = 0; k < r.blocks->size(); ++k) {
        if ((*r.blocks)[k].is_zero()) continue;
        parts.push_back(json{{"ordinal", r.ordinals[k]}, {"block", elem_json(alg(), (*r.blocks)[k])}});
        text += ", " + std::to_string(r.ordinals[k]) + " on " + alg().format((*r.blocks)[k]);
      }
      out->json["mixing"] = std::move(parts);
    }
    report(text);
  }

  void st_psi() {
    const std::string name = definition();
    if (toks[3].text != "perm") throw Error(Errc::SyntaxError, "expected 'psi NAME = perm i j ...'");
    std::vector<int> perm;
    for (std::size_t i = 4; i < toks.size(); ++i) perm.push_back(to_int(toks[i].text));
    const Hom rho = Hom::permutation(alg(), perm);
    const SetId psi = psi_rho(*u, rho);
    store_set(name, psi);
    bool property_a = true;
    for (const Elem& b : alg().elements())
      property_a = property_a && u->truth_mem(u->name(element_code(b)), psi) == rho(b);
    const Elem uf = eval_bv(*u, ultrafilter_formula(), ultrafilter_assignment(*u, psi));
    out->json["set"] = set_json(psi);
    out->json["membership_is_rho"] = property_a;
    out->json["ultrafilter"] = elem_json(alg(), uf);
    report("psi " + name + ": [[b^ in psi]] = rho(b) " + (property_a ? "for all b" : "FAILS") + ", ultrafilter truth " +
           alg().format(uf));
  }

  void st_two_point() {
    no_more(1);
    const TwoPointDescent d = descend_two_point(*u);
    json chi = json::object();
    for (const Elem& b : alg().elements()) chi[alg().format(b)] = d.chi[static_cast<std::size_t>(b.bits)];
    out->json["two"] = d.two;
    out->json["chi"] = std::move(chi);
    out->json["truth_values_ok"] = d.truth_values_ok;
    out->json["bijective"] = d.bijective;
    out->json["preserves_ops"] = d.preserves_ops;
    report(std::string("two-point: chi ") + (d.ok() ? "is a Boolean isomorphism onto 2^ down" : "FAILS") +
           " (truth values " + (d.truth_values_ok ? "ok" : "bad") + ", bijective " + (d.bijective ? "yes" : "no") +
           ", operations " + (d.preserves_ops ? "preserved" : "not preserved") + ")");
  }

  const BSet& bset(const std::string& name) {
    auto it = bsets.find(name);
    if (it == bsets.end()) throw Error(Errc::UnknownSymbol, "no B-set named '" + name + "'");
    return it->second;
  }

  json metric_json(const BSet& X) {
    json rows = json::array();
    for (int x = 0; x < X.size(); ++x) {
      json row = json::array();
      for (int y = 0; y < X.size(); ++y) row.push_back(elem_json(alg(), X.d(x, y)));
      rows.push_back(std::move(row));
    }
    return rows;
  }

  void st_bset() {
    const std::string name = arg(1, "B-set name").text;
    const std::string kind = arg(2, "B-set kind").text;
    std::optional<BSet> X;
    if (kind == "discrete") {
      X = BSet::discrete(alg(), to_int(arg(3, "point count").text));
      no_more(4);
    } else if (kind == "symmdiff") {
      no_more(3);
      X = BSet::symmdiff(alg());
    } else if (kind == "random") {
      X = random_bset(alg(), rng, to_int(arg(3, "point count").text));
      no_more(4);
    } else if (kind == "from") {
      std::vector<SetId> xs;
      for (const std::string& item : split_top(join_texts(toks, 3), ',')) xs.push_back(resolve(item));
      X = BSet::from_universe(*u, xs);
    } else {
      throw Error(Errc::SyntaxError, "unknown B-set kind '" + kind + "'");
    }
    bsets.erase(name);
    systems.erase(name);
    if (kind == "symmdiff") symmdiff_bsets.insert(name);
    else symmdiff_bsets.erase(name);
    const BSet& stored = bsets.emplace(name, std::move(*X)).first->second;
    out->json["name"] = name;
    out->json["labels"] = stored.labels();
    out->json["metric"] = metric_json(stored);
    report("bset " + name + ": " + std::to_string(stored.size()) + " points");
  }

  std::vector<int> points(const BSet& X, std::size_t from) {
    std::vector<int> out_points;
    for (const std::string& item : split_top(join_texts(toks, from), ',')) {
      auto p = X.find(item);
      if (!p) throw Error(Errc::UnknownSymbol, "no point '" + item + "'");
      out_points.push_back(*p);
    }
    return out_points;
  }

  json labels_json(const BSet& X, const std::vector<int>& ps) {
    json out_labels = json::array();
    for (int p : ps) out_labels.push_back(X.label(p));
    return out_labels;
  }

  void st_cyc() {
    const BSet& X = bset(arg(1, "B-set name").text);
    const auto A = points(X, 2);
    const auto hull = cyc(X, A);
    out->json["cyc"] = labels_json(X, hull);
    std::string text = "cyc:";
    for (int p : hull) text += " " + X.label(p);
    report(text);
  }

  // Built-in tables. The Boolean ones read point c<i> of a symmdiff carrier
  // as the element with mask i.
  std::vector<Mask> builtin_pred(const std::string& table, const BSet& X, bool symm, int arity) {
    const auto n = tuple_count(X.size(), arity);
    std::vector<Mask> cells;
    const Mask full = alg().full_mask();
    for (std::size_t code = 0; code < n; ++code) {
      const auto t = decode_tuple(code, X.size(), arity);
      auto el = [&](std::size_t k) { return static_cast<Mask>(t[k]); };
      if (table == "eq-table" && arity == 2) cells.push_back(full & ~X.d_bits(t[0], t[1]));
      else if (table == "imp-table" && arity == 2 && symm) cells.push_back(full & (~el(0) | el(1)));
      else if (table == "id-table" && arity == 1 && symm) cells.push_back(el(0));
      else throw Error(Errc::BadSpec, "no built-in predicate " + table + " of arity " + std::to_string(arity) + " here");
    }
    return cells;
  }

  std::vector<int> builtin_op(const std::string& table, const BSet& X, bool symm, int arity) {
    if (!symm) throw Error(Errc::BadSpec, "built-in operation tables need a symmdiff carrier");
    const auto n = tuple_count(X.size(), arity);
    const Mask full = alg().full_mask();
    std::vector<int> cells;
    for (std::size_t code = 0; code < n; ++code) {
      const auto t = decode_tuple(code, X.size(), arity);
      Mask v = 0;
      if (table == "meet-table" && arity == 2) v = static_cast<Mask>(t[0]) & static_cast<Mask>(t[1]);
      else if (table == "join-table" && arity == 2) v = static_cast<Mask>(t[0]) | static_cast<Mask>(t[1]);
      else if (table == "neg-table" && arity == 1) v = full & ~static_cast<Mask>(t[0]);
      else if (table == "zero-table" && arity == 0) v = 0;
      else if (table == "one-table" && arity == 0) v = full;
      else throw Error(Errc::BadSpec, "no built-in operation " + table + " of arity " + std::to_string(arity));
      cells.push_back(static_cast<int>(v));
    }
    return cells;
  }

  void st_bsystem() {
    const std::string name = arg(1, "system name").text;
    if (arg(2, "'over'").text != "over") throw Error(Errc::SyntaxError, "expected 'bsystem NAME over BSET sig(...)'");
    const std::string carrier = arg(3, "B-set name").text;
    const BSet& X = bset(carrier);
    const bool symm = symmdiff_bsets.count(carrier) != 0;
    const std::string sig_text = arg(4, "signature").text;
    if (sig_text.rfind("sig", 0) != 0) throw Error(Errc::SyntaxError, "expected sig(...)");
    Signature sig;
    for (const std::string& item : split_top(strip(sig_text.substr(3), '(', ')'), ',')) {
      std::string decl = item;
      const bool op = decl.rfind("fn ", 0) == 0;
      if (op) decl = trim(decl.substr(3));
      const auto slash = decl.find('/');
      if (slash == std::string::npos) throw Error(Errc::SyntaxError, "expected name/arity, got '" + item + "'");
      const std::string sym = trim(decl.substr(0, slash));
      const int arity = to_int(trim(decl.substr(slash + 1)));
      if (op) sig.function(sym, arity);
      else sig.predicate(sym, arity);
    }
    std::map<std::string, std::vector<int>> ops;
    std::map<std::string, std::vector<Mask>> preds;
    for (const auto& [sym, spec] : bindings(5)) {
      const bool is_op = sig.has_function(sym);
      if (!is_op && !sig.has_predicate(sym)) throw Error(Errc::UnknownSymbol, "'" + sym + "' is not in the signature");
      const int arity = is_op ? sig.function_arity(sym) : sig.predicate_arity(sym);
      if (!spec.empty() && spec.front() == '[') {
        const auto items = split_top(strip(spec, '[', ']'), ',');
        if (is_op) {
          std::vector<int> cells;
          for (const std::string& it : items) {
            auto p = X.find(it);
            cells.push_back(p ? *p : to_int(it));
          }
          ops[sym] = std::move(cells);
        } else {
          std::vector<Mask> cells;
          for (const std::string& it : items) cells.push_back(alg().parse(it).bits);
          preds[sym] = std::move(cells);
        }
      } else if (is_op) {
        ops[sym] = builtin_op(spec, X, symm, arity);
      } else {
        preds[sym] = builtin_pred(spec, X, symm, arity);
      }
    }
    BSystem S = BSystem::make(X, sig, std::move(ops), std::move(preds));
    systems.erase(name);
    systems.emplace(name, std::move(S));
    json syms = json::object();
    for (const auto& [sym, arity] : sig.predicates()) syms[sym] = json{{"kind", "predicate"}, {"arity", arity}};
    for (const auto& [sym, arity] : sig.functions()) syms[sym] = json{{"kind", "operation"}, {"arity", arity}};
    out->json["name"] = name;
    out->json["carrier"] = carrier;
    out->json["signature"] = std::move(syms);
    report("bsystem " + name + " over " + carrier + ": contractive");
  }

  const BSystem& system(const std::string& name) {
    auto it = systems.find(name);
    if (it == systems.end()) throw Error(Errc::UnknownSymbol, "no B-system named '" + name + "'");
    return it->second;
  }

  void st_beval() {
    const BSystem& S = system(arg(1, "system name").text);
    const Formula f = formula_at(2, S.sig);
    std::map<std::string, int> a;
    for (const auto& [var, label] : bindings(3)) {
      auto p = S.base.find(label);
      if (!p) throw Error(Errc::UnknownSymbol, "no point '" + label + "'");
      a[var] = *p;
    }
    const Elem truth = eval_bsystem(S, f, a);
    out->json["formula"] = to_string(f);
    truth_fields(truth);
    report("beval " + to_string(f) + ": " + alg().format(truth));
  }

  void st_hom() {
    const BSystem& S1 = system(arg(1, "system name").text);
    const BSystem& S2 = system(arg(2, "system name").text);
    std::vector<int> h;
    for (const std::string& item : split_top(strip(arg(3, "map").text, '[', ']'), ',')) {
      auto p = S2.base.find(item);
      if (!p) throw Error(Errc::UnknownSymbol, "no point '" + item + "'");
      h.push_back(*p);
    }
    no_more(4);
    const HomReport r = check_homomorphism(h, S1, S2);
    out->json["hom"] = r.hom;
    out->json["strong"] = r.strong;
    out->json["iso"] = r.iso;
    report(std::string("hom: ") + (r.iso ? "isomorphism" : r.strong ? "strong homomorphism" : r.hom ? "homomorphism" : "not a homomorphism"));
  }

  void st_realize() {
    const auto as = take_as();
    const auto rank = take_option("--rank");
    const BSet& X = bset(arg(1, "B-set name").text);
    no_more(2);
    const Realization r = realize_bset(*u, X, rank ? std::optional<int>(to_int(*rank)) : std::nullopt);
    if (as) store_set(*as, r.realized);
    bool exact = true;
    for (int x = 0; x < X.size(); ++x)
      for (int y = 0; y < X.size(); ++y)
        exact = exact && X.d_bits(x, y) == (alg().full_mask() & ~u->eq_bits(r.iota[static_cast<std::size_t>(x)], r.iota[static_cast<std::size_t>(y)]));
    json iota = json::object();
    for (int x = 0; x < X.size(); ++x) iota[X.label(x)] = set_json(r.iota[static_cast<std::size_t>(x)]);
    out->json["iota"] = std::move(iota);
    out->json["realized"] = set_json(r.realized);
    out->json["metric_matches"] = exact;
    report("realize " + toks[1].text + ": d(x,y) " + (exact ? "=" : "!=") + " [[iota x != iota y]], realized " +
           set_text(r.realized));
  }

  const FinPoset& poset(const std::string& name) {
    auto it = posets.find(name);
    if (it == posets.end()) throw Error(Errc::UnknownSymbol, "no poset named '" + name + "'");
    return it->second;
  }

  void st_poset() {
    const std::string name = definition();
    const std::string kind = toks[3].text;
    std::optional<FinPoset> P;
    auto count = [&](std::size_t i) { return to_int(arg(i, "size").text); };
    if (kind == "chain") {
      P = FinPoset::chain(count(4));
      no_more(5);
    } else if (kind == "antichain") {
      P = FinPoset::antichain(count(4));
      no_more(5);
    } else if (kind == "boolean") {
      P = FinPoset::boolean(count(4));
      no_more(5);
    } else if (kind == "forcing") {
      const int n = count(4);
      const int m = count(5);
      std::optional<int> kappa;
      if (toks.size() > 6) kappa = count(6);
      no_more(kappa ? 7 : 6);
      if (kappa && *kappa > n)
        out->json["warning"] = "kappa exceeds n, so the poset equals C(n,m); infinite-kappa phenomena are out of scope";
      P = forcing_c(n, m, kappa);
    } else if (kind == "order") {
      std::vector<std::string> labels;
      std::vector<std::pair<int, int>> below;
      auto index = [&](const std::string& l) {
        auto it = std::find(labels.begin(), labels.end(), l);
        if (it != labels.end()) return static_cast<int>(it - labels.begin());
        labels.push_back(l);
        return static_cast<int>(labels.size()) - 1;
      };
      for (std::size_t i = 4; i < toks.size(); ++i) {
        const auto chain = split_top(toks[i].text, '<');
        if (chain.empty() || chain.front().empty()) throw Error(Errc::SyntaxError, "bad order item '" + toks[i].text + "'");
        int prev = index(chain[0]);
        for (std::size_t k = 1; k < chain.size(); ++k) {
          const int next = index(chain[k]);
          below.emplace_back(prev, next);
          prev = next;
        }
      }
      P = FinPoset::from_pairs(std::move(labels), below);
    } else {
      throw Error(Errc::SyntaxError, "unknown poset kind '" + kind + "'");
    }
    posets.erase(name);
    const FinPoset& stored = posets.emplace(name, std::move(*P)).first->second;
    json labels = json::array();
    for (int p = 0; p < stored.size(); ++p) labels.push_back(stored.label(p));
    out->json["name"] = name;
    out->json["size"] = stored.size();
    out->json["labels"] = std::move(labels);
    std::string text = "poset " + name + ": " + std::to_string(stored.size()) + " points";
    if (out->json.contains("warning")) text += " (warning: " + out->json["warning"].get<std::string>() + ")";
    report(text);
  }

  void st_complete() {
    const bool dot = take_switch("--dot");
    const FinPoset& P = poset(arg(1, "poset name").text);
    no_more(2);
    const Completion c = completion(P);
    json atoms = json::array();
    for (int q = 0; q < c.algebra.atom_count(); ++q) atoms.push_back(c.algebra.atom_name(q));
    json bands = json::object();
    for (int p = 0; p < P.size(); ++p) bands[P.label(p)] = elem_json(c.algebra, c.band_of(P, p));
    out->json["atoms"] = std::move(atoms);
    if (c.bands) out->json["band_count"] = c.bands->size();
    out->json["principal_bands"] = std::move(bands);
    std::string text = "complete " + toks[1].text + ": " + std::to_string(c.algebra.atom_count()) + " atoms";
    for (int q = 0; q < c.algebra.atom_count(); ++q) text += " " + c.algebra.atom_name(q);
    if (dot) {
      const std::string d = completion_dot(P, c);
      out->json["dot"] = d;
      text += "\n" + d;
      while (text.back() == '\n') text.pop_back();
    }
    report(text);
  }

  RefinedReport refined_fields(const FinPoset& P) {
    const RefinedReport r = refinedness_conditions(P);
    out->json["separation"] = r.separation;
    out->json["principal_is_interval"] = r.principal_is_interval;
    out->json["injective"] = r.injective;
    out->json["dense_embedding"] = r.dense_embedding;
    out->json["consistent"] = r.consistent();
    out->json["notes"] = r.notes;
    return r;
  }

  static std::string refined_text(const RefinedReport& r) {
    auto b = [](bool v) { return v ? "1" : "0"; };
    return std::string(" (a)=") + b(r.separation) + " (b)=" + b(r.principal_is_interval) + " (c)=" + b(r.injective) +
           " (d)=" + b(r.dense_embedding) + (r.consistent() ? "" : ", conditions disagree");
  }

  void st_refined() {
    const FinPoset& P = poset(arg(1, "poset name").text);
    no_more(2);
    const RefinedReport r = refined_fields(P);
    out->json["refined"] = r.consistent() ? json(r.separation) : json(nullptr);
    report("refined? " + toks[1].text + ":" + (r.consistent() ? (r.separation ? " yes" : " no") : "") + refined_text(r));
  }
};

Session::Session(SessionOptions opts) : opts_(opts), state_(std::make_unique<State>(opts_)) {
  state_->set_algebra("B", BoolAlg(opts_.atoms));
}

Session::~Session() = default;

Universe& Session::universe() { return *state_->u; }

std::optional<StatementResult> Session::execute(std::string_view statement, int line) {
  StatementResult result;
  result.line = line;
  try {
    state_->toks = tokenize(statement);
    if (state_->toks.empty()) return std::nullopt;
    result.verb = state_->toks[0].text;
    result.json["line"] = line;
    result.json["statement"] = result.verb;
    state_->out = &result;
    state_->run(result.verb);
    if (result.verb != result.json["statement"]) result.json["statement"] = result.verb;
  } catch (const ScriptError& e) {
    throw ScriptError(line, e.column(), e.message());
  } catch (const Error& e) {
    throw ScriptError(line, 0, e.what());
  } catch (const std::exception& e) {
    throw ScriptError(line, 0, e.what());
  }
  state_->out = nullptr;
  return result;
}

ScriptReport run_script(std::string_view text, const SessionOptions& opts) {
  ScriptReport report;
  Session session(opts);
  int line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    ++line;
    try {
      if (auto r = session.execute(text.substr(start, end - start), line)) {
        if (r->check) {
          ++report.checks;
          if (!*r->check) ++report.failed;
        }
        report.results.push_back(std::move(*r));
      }
    } catch (const ScriptError& e) {
      report.error = e;
      break;
    }
    start = end + 1;
  }
  return report;
}

}  // namespace bvm
