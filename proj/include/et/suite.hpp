#pragma once
#include <map>
#include <string>
#include <vector>

namespace et {

// Result of one acceptance check.
struct CheckResult {
  int criterion = 0;  // 1..12
  std::string name;
  bool pass = false;
  double max_residual = 0;
  double tol = 0;
  std::string detail;
  // per-case residual table (name, value) written to the CSV report
  std::vector<std::pair<std::string, double>> residuals;
};

struct SuiteOptions {
  unsigned seed = 20260826;
  // named tolerance overrides, e.g. {"metric", 1e-8}; values must be > 0
  std::map<std::string, double> tol;
};

// Names accepted by run_suite (plus "all").
const std::vector<std::string>& suite_names();

// Runs one named suite ("conics", "relations", "metrics", "classification",
// "duality", "chamber", "knots", "structure", "harmonicity", "deformations",
// "viviani", "directrix") or "all".  Throws BadSpec for unknown names or
// non-positive tolerance overrides.
std::vector<CheckResult> run_suite(const std::string& name,
                                   const SuiteOptions& opt = {});

}  // namespace et
