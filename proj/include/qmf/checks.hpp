#pragma once

#include <string>
#include <vector>

namespace qmf {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<std::string> check_suites();

// Runs one invariant suite, or every suite for "all"; unknown names throw DomainError.
std::vector<CheckResult> run_checks(const std::string& suite);

}  // namespace qmf
