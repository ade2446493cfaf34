#pragma once

#include <functional>
#include <string>
#include <vector>

namespace flocksim {

enum class VerifyLevel { fast, full };

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

/// Test hooks for fault injection; normal callers pass nullptr.
struct VerifyHooks {
  /// Applied to the multiplier-table copy the homogeneity check runs on.
  std::function<void(std::vector<double>&)> corrupt_multiplier;
};

/// Self-check suite over the numerical core. `fast` covers the transform,
/// kernel and multiplier oracles (seconds); `full` adds the evolution-law
/// residual, the dissipation certificate, and convergence studies (minutes).
VerifyReport verify(VerifyLevel level, const VerifyHooks* hooks = nullptr);

/// One line per check: name, measured value, tolerance, PASS/FAIL.
std::string format_report(const VerifyReport& report);

}  // namespace flocksim
