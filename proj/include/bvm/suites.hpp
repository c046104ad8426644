#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bvm {

struct SuiteOptions {
  std::uint64_t seed = 0;
};

struct SuiteResult {
  int id = 0;
  std::string name;
  std::string title;
  bool pass = false;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double seconds = 0;
  /// One line describing what was measured, and the first failure if any.
  std::string detail;
};

/// Names of the acceptance suites, in criterion order.
const std::vector<std::string>& suite_names();

/// Runs one suite by name; throws UnknownSymbol for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts = {});

std::vector<SuiteResult> run_all_suites(const SuiteOptions& opts = {});

/// Escher-rule instances on rank-`rank` fragments, cycling through the four
/// rules. The escher suite is escher_check(opts, 3, 160).
SuiteResult escher_check(const SuiteOptions& opts, int rank, int samples);

}  // namespace bvm
