#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mfbm {

struct ClauseResult {
    bool passed = false;
    std::string text;
};

struct CriterionResult {
    int number = 0;
    std::string name;
    bool passed = false;
    std::vector<ClauseResult> clauses;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20260809;
    long mc_replications = 2000;
    long lan_replications = 500;
};

/// Runs the full verification battery and prints one PASS/FAIL line per
/// criterion (with per-clause detail) to `out`. Deterministic given the seed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace mfbm
