#pragma once

// Self-check suite behind `fgc verify`: fast kernels against brute-force
// oracles, gradient checks, Sinkhorn contracts and solver invariants.

#include <cstdint>
#include <string>
#include <vector>

namespace fgc {

struct VerifyOptions {
  int k = 3;             // largest power exercised
  std::size_t n = 512;   // largest 1D size for the multiply oracle
  std::size_t side = 16; // largest 2D side for the multiply oracle
  int trials = 10;
  std::uint64_t seed = 1;
  bool inject_fault = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::vector<std::string> failed() const;
};

VerifyReport run_verify(const VerifyOptions& options);

/// One "PASS|FAIL name measured <= threshold" line per check.
std::string format_ledger(const VerifyReport& report);

}  // namespace fgc
