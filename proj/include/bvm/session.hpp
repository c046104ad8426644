#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bvm/bsets.hpp"
#include "bvm/error.hpp"
#include "bvm/hf.hpp"
#include "bvm/posets.hpp"
#include "bvm/universe.hpp"

namespace bvm {

struct SessionOptions {
  int atoms = 2;
  int rank_max = 3;
  std::size_t cap = 200000;
  std::uint64_t seed = 0;
};

/// A failed statement. `line` is the 1-based script line; `column` points
/// into the statement when the failure came from a formula.
class ScriptError : public Error {
 public:
  ScriptError(int line, int column, const std::string& msg);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  /// The message without the position prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

/// Outcome of one statement. `check` is set for statements whose result
/// counts toward the exit status.
struct StatementResult {
  int line = 0;
  std::string verb;
  nlohmann::ordered_json json;
  std::string text;
  std::optional<bool> check;
};

/// Script interpreter state: one algebra and its universe, plus named
/// HF sets, Boolean-valued sets, B-sets, B-systems and posets. Switching the
/// algebra drops everything that lives in the old universe.
class Session {
 public:
  explicit Session(SessionOptions opts = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Runs one statement. Blank lines and `#` comments yield nothing.
  /// Throws ScriptError.
  std::optional<StatementResult> execute(std::string_view statement, int line);

  const SessionOptions& options() const noexcept { return opts_; }
  Universe& universe();

 private:
  struct State;
  SessionOptions opts_;
  std::unique_ptr<State> state_;
};

struct ScriptReport {
  std::vector<StatementResult> results;
  std::size_t checks = 0;
  std::size_t failed = 0;
  /// Set when execution stopped at an error.
  std::optional<ScriptError> error;
  bool ok() const { return failed == 0 && !error; }
};

/// Runs every line of `text` in a fresh session, stopping at the first error.
ScriptReport run_script(std::string_view text, const SessionOptions& opts = {});

/// JSON rendering of an algebra element: sorted array of atom names.
nlohmann::ordered_json elem_json(const BoolAlg& alg, const Elem& e);

/// Nested dump of x: {"root": id, "sets": {id: {child-id: atoms}}} over
/// every set reachable from x.
nlohmann::ordered_json dump_json(const Universe& u, SetId x);

}  // namespace bvm
