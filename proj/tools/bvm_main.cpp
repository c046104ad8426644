#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bvm/session.hpp"
#include "bvm/suites.hpp"

namespace {

using json = nlohmann::ordered_json;

enum class Format { Text, Json };

void print(const bvm::StatementResult& r, Format format) {
  if (format == Format::Json) std::cout << r.json.dump() << '\n';
  else std::cout << r.text << '\n';
}

void print_error(const bvm::ScriptError& e, Format format) {
  if (format == Format::Json) {
    json j{{"error", json{{"line", e.line()}, {"message", e.message()}}}};
    if (e.column() > 0) j["error"]["column"] = e.column();
    std::cout << j.dump() << '\n';
  }
  std::cerr << "error: " << e.what() << '\n';
}

// Inline scripts separate statements with ';' outside quotes.
std::string inline_script(const std::string& text) {
  std::string out;
  bool quoted = false;
  for (char c : text) {
    if (c == '"') quoted = !quoted;
    out += (c == ';' && !quoted) ? '\n' : c;
  }
  return out;
}

int run(const std::string& text, const bvm::SessionOptions& opts, Format format) {
  const bvm::ScriptReport report = bvm::run_script(text, opts);
  for (const auto& r : report.results) print(r, format);
  if (report.error) print_error(*report.error, format);
  if (format == Format::Json)
    std::cout << json{{"summary", json{{"checks", report.checks}, {"failed", report.failed}, {"error", report.error.has_value()}}}}.dump()
              << '\n';
  else
    std::cout << "checks: " << report.checks << ", failed: " << report.failed << '\n';
  if (report.error) return 2;
  return report.failed == 0 ? 0 : 1;
}

int repl(const bvm::SessionOptions& opts, Format format) {
  bvm::Session session(opts);
  const bool interactive = isatty(STDIN_FILENO) != 0;
  std::size_t failed = 0;
  std::string line;
  for (int n = 1;; ++n) {
    if (interactive) std::cout << "bvm> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    try {
      if (auto r = session.execute(line, n)) {
        if (r->check && !*r->check) ++failed;
        print(*r, format);
      }
    } catch (const bvm::ScriptError& e) {
      print_error(e, format);
    }
  }
  return failed == 0 ? 0 : 1;
}

int suite(const std::string& name, const bvm::SessionOptions& opts, Format format) {
  std::vector<bvm::SuiteResult> results;
  try {
    if (name == "all") results = bvm::run_all_suites({opts.seed});
    else results.push_back(bvm::run_suite(name, {opts.seed}));
  } catch (const bvm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.pass;
    if (format == Format::Json) {
      std::cout << json{{"id", r.id},       {"name", r.name},         {"title", r.title},  {"pass", r.pass},
                        {"cases", r.cases}, {"failures", r.failures}, {"detail", r.detail}}
                       .dump()
                << '\n';
    } else {
      std::cout << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.cases << " cases, "
                << r.failures << " failures, " << r.seconds << " s; " << r.detail << '\n';
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite Boolean-valued models of set theory"};
  app.require_subcommand(1);
  app.fallthrough();

  bvm::SessionOptions opts;
  std::string format_name = "text";
  app.add_option("--atoms", opts.atoms, "atoms of the initial algebra")->capture_default_str()->check(CLI::Range(0, 64));
  app.add_option("--rank-max", opts.rank_max, "default fragment rank")->capture_default_str()->check(CLI::Range(0, 6));
  app.add_option("--cap", opts.cap, "enumeration cap")->capture_default_str();
  app.add_option("--seed", opts.seed, "random seed")->capture_default_str();
  app.add_option("--format", format_name, "output format")->capture_default_str()->check(CLI::IsMember({"text", "json"}));

  auto* run_cmd = app.add_subcommand("run", "run a script file, or inline statements with -e");
  std::string path;
  std::string inline_text;
  run_cmd->add_option("file", path, "script file ('-' for stdin)");
  run_cmd->add_option("-e,--eval", inline_text, "statements separated by ';'");

  auto* repl_cmd = app.add_subcommand("repl", "read statements from stdin");

  auto* suite_cmd = app.add_subcommand("suite", "run an acceptance suite");
  std::string suite_name;
  std::string names = "all";
  for (const auto& n : bvm::suite_names()) names += ", " + n;
  suite_cmd->add_option("name", suite_name, "one of: " + names)->required();

  CLI11_PARSE(app, argc, argv);
  const Format format = format_name == "json" ? Format::Json : Format::Text;

  if (*run_cmd) {
    if (path.empty() == inline_text.empty()) {
      std::cerr << "error: give exactly one of a script file or -e\n";
      return 2;
    }
    std::string text;
    if (!inline_text.empty()) {
      text = inline_script(inline_text);
    } else if (path == "-") {
      std::stringstream ss;
      ss << std::cin.rdbuf();
      text = ss.str();
    } else {
      std::ifstream in(path);
      if (!in) {
        std::cerr << "error: cannot read " << path << '\n';
        return 2;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    return run(text, opts, format);
  }
  if (*repl_cmd) return repl(opts, format);
  return suite(suite_name, opts, format);
}
