// Brute-force ground truth by enumerating every signal path.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hmmlab/model.hpp"

namespace hmmlab::oracle {

/// Largest number of enumerated paths, d^(N+1).
inline constexpr std::size_t kMaxPaths = 10'000'000;

/**
 * @brief Joint weight of every signal path x_0..x_N with a fixed observation path.
 *
 * weight(x) = prior[x_0] prod_{k>0} P[x_{k-1}][x_k] prod_k g(x_k, y_k) phi[y_k],
 * which is the probability mass P(x, y). Path codes are base-d with x_0 as the
 * least significant digit.
 */
class JointTable {
public:
    std::size_t states() const noexcept { return d_; }
    std::size_t length() const noexcept { return length_; }
    std::size_t path_count() const noexcept { return weights_.size(); }
    double weight(std::size_t code) const { return weights_[code]; }

    /// Kahan-compensated sum of all weights: P(y_0..y_N).
    double total() const noexcept { return total_; }
    /// total() / prod_k phi[y_k] = E[prod_k g(X_k, y_k)], comparable to the filter's likelihood.
    double density_total() const noexcept { return total_ / phi_product_; }

    /// Decodes a path code into states x_0..x_N.
    void decode(std::size_t code, std::vector<std::size_t> &path) const;

    friend JointTable joint_table(const HmmModel &model, const Distribution &prior,
                                  const ObservationPath &y);

private:
    std::size_t d_ = 0;
    std::size_t length_ = 0;
    std::vector<double> weights_;
    double total_ = 0.0;
    double phi_product_ = 1.0;
};

/// Throws SizeGuardExceeded past kMaxPaths and ModelError for continuous channels.
JointTable joint_table(const HmmModel &model, const Distribution &prior, const ObservationPath &y);

using PathPredicate = std::function<bool(std::span<const std::size_t>)>;
using StateQuery = std::function<std::size_t(std::span<const std::size_t>)>;
using ValueQuery = std::function<double(std::span<const std::size_t>)>;

/// Law of query(path) given condition(path); throws ZeroMassCondition.
Distribution conditional_law(const JointTable &table, const PathPredicate &condition,
                             const StateQuery &query);
/// E[query(path) | condition(path)]; throws ZeroMassCondition.
double conditional_expectation(const JointTable &table, const PathPredicate &condition,
                               const ValueQuery &query);

// Common queries -------------------------------------------------------------

/// P(X_n | y_0..y_N) from the table.
Distribution marginal(const JointTable &table, std::size_t n);
/// P(X_n | X_{n-1} = from, y_0..y_N).
Distribution transition(const JointTable &table, std::size_t n, std::size_t from);
/// P(X_0 | X_n = terminal, y_0..y_N).
Distribution pinned_initial(const JointTable &table, std::size_t n, std::size_t terminal);

/**
 * @brief Every one- and two-time marginal needed by the sweeps, in one pass.
 *
 * Masses are unnormalized joint weights; the *_law accessors condition and
 * return nullopt when the conditioning event has zero mass.
 */
class TableSummary {
public:
    explicit TableSummary(const JointTable &table);

    /// P(X_n | y_0..y_N).
    Distribution marginal_law(std::size_t n) const;
    /// P(X_n | X_{n-1} = from, y_0..y_N), n >= 1.
    std::optional<Distribution> transition_law(std::size_t n, std::size_t from) const;
    /// P(X_0 | X_n = terminal, y_0..y_N).
    std::optional<Distribution> pinned_law(std::size_t n, std::size_t terminal) const;

private:
    std::size_t d_ = 0;
    double total_ = 0.0;
    std::vector<std::vector<double>> marginal_; // [n][x]
    std::vector<std::vector<double>> pair_;     // [n][x_{n-1} * d + x_n]
    std::vector<std::vector<double>> ends_;     // [n][x_0 * d + x_n]
};

// =============================================================================
// Random model generator
// =============================================================================

struct RandomModelOptions {
    std::size_t states = 3;
    std::size_t alphabet = 2;
    /// Probability of zeroing each kernel and channel entry (0 = strictly positive).
    double zero_probability = 0.0;
};

/**
 * @brief Kernel rows and channel rows drawn uniformly from the simplex.
 *
 * The channel uses phi = 1. With zero injection, entries are zeroed at random
 * (keeping at least one per row) and draws repeat until the kernel has a
 * unique invariant law.
 */
HmmModel random_model(Rng &rng, const RandomModelOptions &options);
Distribution random_distribution(Rng &rng, std::size_t d);

} // namespace hmmlab::oracle
