#pragma once

#include <cstdint>
#include <iosfwd>

namespace bornrate {

struct SelftestOptions {
  /// Relative tolerance handed to the Born cubature.
  double rel_tol = 1e-7;
  /// Seed of the Monte-Carlo oracle.
  std::uint64_t seed = 0x5eed;
  unsigned threads = 1;
};

/// Runs a fast set of invariant checks, printing one PASS/FAIL line each.
/// Returns the number of failed checks.
int run_selftest(std::ostream &os, const SelftestOptions &opts = {});

} // namespace bornrate
