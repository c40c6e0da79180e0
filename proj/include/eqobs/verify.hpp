#pragma once

// Randomized algebraic verification. Each case draws fresh group, algebra,
// state and input samples (seeded per case index, so results do not depend on
// scheduling) and evaluates every identity the construction relies on. The
// report holds the maximum residual per identity.

#include <cstdint>
#include <string>
#include <vector>

#include "eqobs/lie_group.hpp"

namespace eqobs {

struct VerifyOptions {
  std::string group = "se2";
  int cases = 1000;
  std::uint64_t seed = 0;
  /// Replace the input action with the variant lacking the +a shift.
  bool corrupt_input_action = false;
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_residual <= tolerance; }
};

struct VerifyReport {
  std::string group;
  int cases = 0;
  std::vector<CheckResult> checks;
  /// Cases that threw instead of producing residuals.
  int failed_cases = 0;
  std::string first_failure;

  bool passed() const;
  const CheckResult& check(const std::string& name) const;
};

/// Names and tolerances of every check, in report order.
std::vector<CheckResult> verify_checks();

/// Cases distributed over OpenMP threads.
VerifyReport verify_suite(const VerifyOptions& options);
/// Single-threaded reference; produces the same report.
VerifyReport verify_suite_serial(const VerifyOptions& options);

/// Residuals of one case, in verify_checks() order.
std::vector<double> verify_case(const GroupPtr& group, std::uint64_t seed, int index,
                                bool corrupt_input_action);

std::string format_report(const VerifyReport& report);

}  // namespace eqobs
