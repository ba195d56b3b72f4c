#pragma once

#include <span>
#include <string>
#include <vector>

namespace pvar {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;

  bool pass() const { return checks_pass && seconds <= budget_seconds; }
};

/// Runs the acceptance criteria (all of them when `only` is empty).
std::vector<CriterionResult> run_acceptance(std::span<const int> only = {});

/// One line: "PASS  3  name  (1.2 s / 30 s)  detail".
std::string format_result(const CriterionResult& r);

}  // namespace pvar
