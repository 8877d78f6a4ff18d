/// @file verify.hpp
/// @brief Randomized verification of the relaxation-system algebra.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "relaxlbm/algebra.hpp"

namespace relaxlbm {

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 12345;
    int draws = 100;
    /// Test hook: flip the sign of one entry of D before checking.
    bool inject_fault = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
};

/// d in {1,2,3}, tau in [0.5, 4], a1 in (0, 2], a2 in [a1, 4],
/// eps in [0.01, 1], gamma in {1, 2}.
StabilityParams random_params(std::mt19937_64& rng, std::optional<int> d = std::nullopt);

struct StabilityCase {
    std::string label;
    StabilityParams params;
    double mu = 0.0;
    std::vector<double> u_max;
    /// Expected violations as (clause, axis), in check order.
    std::vector<std::pair<StabilityClause, std::size_t>> expected;
};

/// Ten hand-constructed parameter sets violating the stability definition.
std::vector<StabilityCase> negative_stability_cases();

VerifyReport run_algebra_suite(const VerifyOptions& options);

void print_report(std::ostream& os, const VerifyReport& report);

}  // namespace relaxlbm
