#pragma once

// Verification suite: nine self-contained checks covering oracle agreement,
// the exact ledger identity, the low-temperature limits, the binomial
// count-measurement entropy, null cycles, erasure closure, coarsening
// monotonicity, and the suite's own runtime budget.  Shared by the `verify`
// CLI command and the standalone acceptance runner.

#include <cstdint>
#include <string>
#include <vector>

namespace szilard::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;  // worst-case residuals, counts, or failure reason
};

struct Options {
    bool quick = false;        // reduced sample sizes, for smoke testing
    std::uint64_t seed = 12345;
};

// Runs all checks in order and returns one result per check.  Deterministic
// for a fixed seed.
std::vector<CheckResult> run_all(const Options& options);

// Prints "PASS name (detail)" lines to stdout; returns true iff all passed.
bool report(const std::vector<CheckResult>& results);

}  // namespace szilard::verify
