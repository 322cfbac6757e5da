#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qrobust::selfcheck {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Criterion suites. Each one is self-contained and deterministic.
CheckResult check_gradient_oracle();        // analytic vs central differences
CheckResult check_unitarity_and_norm();     // propagation norms, U U† = I
CheckResult check_lp_against_enumeration(); // simplex vs vertex enumeration
CheckResult check_scp_mechanics();          // exact-linear objective: unit ratio, doubling diameter

// Fast module invariant suites (one result per module).
std::vector<CheckResult> check_module_invariants();

// Runs everything above, printing one PASS/FAIL line per check.
// Returns true when every check passed.
bool run_all(std::ostream& log);

}  // namespace qrobust::selfcheck
