#pragma once

// Self-check suite behind `pseudoherm verify`.

#include <functional>
#include <string>
#include <vector>

namespace pseudoherm {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs the invariant checks in a fixed order; `progress` sees each result as it completes.
std::vector<CheckResult> run_self_checks(const std::function<void(const CheckResult&)>& progress = {});

}  // namespace pseudoherm
