#pragma once

// Randomized property suites behind `sovi verify`: the log-sum-exp gap bound,
// max-norm contraction of the exact and smoothed operators, Jacobian
// structure and finite-difference agreement, and the smoothed fixed-point gap.

#include <cstdint>
#include <string>
#include <vector>

namespace sovi {

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  /// Largest observed violation margin (<= 0 means every case held).
  double worst_margin = 0.0;
  std::string detail;  // first failing case, if any
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Multiplies the default case counts.
  double scale = 1.0;
};

std::vector<PropertyResult> run_property_suites(const VerifyOptions& opts);

}  // namespace sovi
