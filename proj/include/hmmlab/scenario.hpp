// Seeded multi-trial stability experiments and their registry.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hmmlab/model.hpp"

namespace hmmlab {

/// A prior named relative to a model: its stationary law, uniform, a point mass, or explicit weights.
struct PriorSpec {
    enum class Kind { stationary, uniform, point, weights };
    Kind kind = Kind::stationary;
    std::size_t state = 0;
    std::vector<double> weights;

    static PriorSpec stationary_law() { return {}; }
    static PriorSpec uniform_law() { return {Kind::uniform, 0, {}}; }
    static PriorSpec point(std::size_t s) { return {Kind::point, s, {}}; }
    static PriorSpec explicit_weights(std::vector<double> w) { return {Kind::weights, 0, std::move(w)}; }

    /// Throws ConfigError when invalid for the model's dimension.
    Distribution resolve(const HmmModel &model) const;
    bool operator==(const PriorSpec &) const = default;
};

/// What a scenario asserts about its aggregated curves.
enum class ClaimKind {
    /// mean TV at n = horizon < threshold
    merges_below,
    /// min TV over every trial and time >= threshold
    stays_at_least,
    /// mean D(Pi^mu | Pi^nu) at n = horizon < threshold
    entropy_below,
    /// min over n of (mean TV(n) - singular_mass(mu, n)) >= threshold
    dominates_singular_mass,
};

std::string_view to_string(ClaimKind kind);
ClaimKind claim_from_string(std::string_view text);

struct ScenarioSpec {
    std::string name;
    std::string model_label;
    PriorSpec mu;
    PriorSpec nu;
    /// Law of X_0 for simulated paths (ignored when explicit_path is set).
    PriorSpec path_law;
    std::optional<std::vector<std::size_t>> explicit_path;
    /// Final time index N; paths are y_0..y_N.
    std::size_t horizon = 0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    ClaimKind claim = ClaimKind::merges_below;
    double threshold = 0.0;

    bool operator==(const ScenarioSpec &) const = default;
};

/// Aggregates over trials at one time index.
struct ScenarioRow {
    std::size_t n = 0;
    double tv_mean = 0.0;
    double tv_median = 0.0;
    double tv_max = 0.0;
    double entropy_mean = 0.0;
};

struct ScenarioResult {
    std::string name;
    /// Rows for n = 1..horizon.
    std::vector<ScenarioRow> rows;
    /// Per-trial TV curves over n = 0..horizon (truncated trials are shorter).
    std::vector<std::vector<double>> trial_tv;
    std::size_t truncated_trials = 0;
    ClaimKind claim = ClaimKind::merges_below;
    double metric = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct RunOptions {
    /// Worker threads; 0 picks hardware concurrency.
    std::size_t threads = 0;
};

/**
 * @brief Runs every trial and aggregates.
 *
 * Trial t uses seed child_seed(spec.seed, t). Per-time values are sorted
 * before reduction, so output does not depend on scheduling.
 */
ScenarioResult run_scenario(const ScenarioSpec &spec, const HmmModel &model, const RunOptions &options = {});
/// Same, resolving the model by fixture label.
ScenarioResult run_scenario(const ScenarioSpec &spec, const RunOptions &options = {});

/// Columns n,tv_mean,tv_median,tv_max,entropy_mean then VERDICT,PASS|FAIL,<metric>,<threshold>.
void write_scenario_csv(std::ostream &os, const ScenarioResult &result);

// Registry -------------------------------------------------------------------

/// Scenarios shipped with the library (mirrors data/scenarios.json).
std::vector<ScenarioSpec> default_registry();
const ScenarioSpec &find_scenario(const std::vector<ScenarioSpec> &registry, std::string_view name);

std::vector<ScenarioSpec> parse_registry(std::string_view text);
std::string serialize_registry(const std::vector<ScenarioSpec> &registry);

} // namespace hmmlab
