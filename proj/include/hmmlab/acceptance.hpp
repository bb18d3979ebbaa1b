// Acceptance suite: numbered criteria with fixed tolerances.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmmlab/scenario.hpp"

namespace hmmlab::acceptance {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED2024ULL;
inline constexpr int kCriterionCount = 13;

struct Options {
    std::uint64_t seed = kDefaultSeed;
    /// Run a single criterion.
    std::optional<int> only;
    /// Hand the implementation a perturbed kernel while the oracle keeps the
    /// true one; criterion 1 must then fail.
    bool corrupt_kernel = false;
    /// Scenario registry for the scenario-backed criteria.
    std::vector<ScenarioSpec> registry = default_registry();
    /// Threads for scenario trials (0 = hardware concurrency).
    std::size_t threads = 0;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;
    /// Comparison, e.g. "<=1e-10".
    std::string threshold;
    /// Secondary measurements, free text without commas.
    std::string detail;
    double seconds = 0.0;
    /// Wall-clock budget, 0 when none.
    double budget_seconds = 0.0;
};

/// Runs criteria in id order.
std::vector<CriterionResult> run(const Options &options);

/// One line per criterion: id,PASS|FAIL,measured,threshold,name,detail. No timings.
std::string summary(const std::vector<CriterionResult> &results);

/// id,seconds,budget lines for the runtime report.
std::string timing_report(const std::vector<CriterionResult> &results);

bool all_pass(const std::vector<CriterionResult> &results);

} // namespace hmmlab::acceptance
