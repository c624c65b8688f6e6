#pragma once

#include <string>
#include <vector>

namespace qmap {

struct SuiteReport {
  std::string suite;
  long checked = 0;
  long violations = 0;
  std::string first_failure;
  bool ok() const { return violations == 0; }
};

// Exhaustive invariant suites over every object of genus g with 1..max_n edges:
// roundtrip, euler, bound, labels, chapuy, decomposition.
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, int g, int max_n);

}  // namespace qmap
