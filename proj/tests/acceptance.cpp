// Runs the twelve acceptance suites and prints one line per criterion.
// Exit status counts failing criteria that are not listed with --known-fail.

#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "bvm/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::uint64_t seed = 0;
  std::set<int> known;
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--known-fail", known, "criteria whose failure is recorded and expected");
  CLI11_PARSE(app, argc, argv);

  int unexpected = 0;
  int passed = 0;
  for (const bvm::SuiteResult& r : bvm::run_all_suites({seed})) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.title << "): " << r.cases
              << " cases, " << r.failures << " failures, " << r.seconds << " s; " << r.detail << '\n';
    if (r.pass) ++passed;
    else if (!known.count(r.id)) ++unexpected;
    else std::cout << "     criterion " << r.id << " failure is known\n";
  }
  std::cout << passed << "/12 criteria pass\n";
  return unexpected == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
