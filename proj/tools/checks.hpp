#pragma once
// Named self-checks behind `impwave verify`. Each check draws from its own
// generator seeded from the run seed and its name, so results do not depend
// on which other checks run.

#include <cstdint>
#include <string>
#include <vector>

namespace impwave::cli {

struct VerifySettings {
  int fd_grid_points = 2048;
  double cfl = 0.5;
  int trials = 20;
  std::uint64_t seed = 0;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Checks run when the config names none.
std::vector<std::string> default_checks();

/// Default checks plus the ones that state the source identities literally
/// and are known to fail: "ratio_monotone" and "duality_literal".
std::vector<std::string> known_checks();

CheckResult run_check(const std::string& name, const VerifySettings& settings);

}  // namespace impwave::cli
