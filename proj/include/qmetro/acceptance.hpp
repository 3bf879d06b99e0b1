#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qmetro {

struct CheckOptions {
  double tol_scale = 1.0;   // multiplies every tolerance; negative makes every check fail
  bool only_printed = false;  // criteria whose expected values are printed constants
};

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id = 0;
  std::string name;
  bool printed_values = false;
  std::function<CriterionResult(const CheckOptions&)> run;
};

const std::vector<Criterion>& acceptance_criteria();

// Prints "PASS|FAIL <id> <name>: detail" per selected criterion; returns the failure count.
int run_acceptance(const CheckOptions& opts, std::ostream& out);

}  // namespace qmetro
