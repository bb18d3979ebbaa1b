// Finite-state hidden Markov models: construction, validation, measure
// arithmetic and simulation.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmmlab/channel.hpp"
#include "hmmlab/distribution.hpp"

namespace hmmlab {

/// Invariance tolerance for the stored stationary law.
inline constexpr double kStationaryTolerance = 1e-10;

/// Signal kernel, its invariant law, and the observation channel.
struct HmmModel {
    TransitionKernel kernel;
    Distribution stationary;
    ObservationChannel channel;
    std::string label;

    std::size_t states() const noexcept { return kernel.dim(); }
};

/// Every violated model invariant, one line each; empty when valid.
std::vector<std::string> validate_model(const HmmModel &model);

/**
 * @brief Builds and validates a model.
 *
 * When `stationary` is absent it is computed with stationary_distribution().
 * Throws ModelError listing every violated invariant.
 */
HmmModel make_model(TransitionKernel kernel, ObservationChannel channel, std::string label,
                    std::optional<Distribution> stationary = std::nullopt);

// =============================================================================
// Measure arithmetic
// =============================================================================

/**
 * @brief Invariant law by damped power iteration.
 *
 * The closed communicating classes are read off the zero pattern of P. More
 * than one throws NonUniqueStationary; otherwise p <- (p + pP)/2 (the lazy
 * chain, same invariant laws, aperiodic) runs from the uniform law on the
 * closed class until ||pP - p||_TV <= tol, then keeps going while that
 * residual still shrinks. Transient states get exactly 0.
 * Throws NoConvergence after `max_iterations`.
 */
Distribution stationary_distribution(const TransitionKernel &kernel, double tol = 1e-12,
                                     std::size_t max_iterations = 1'000'000);

/// start * P^n.
Distribution n_step_marginal(const TransitionKernel &kernel, const Distribution &start, std::size_t n);

struct ErgodicityReport {
    bool ergodic = false;
    /// decay[n] = max over z in support(pi) of ||delta_z P^n - pi||_TV, n = 0..horizon.
    std::vector<double> decay;
};

/// Mixing check restricted to the support of the stationary law.
ErgodicityReport check_ergodicity(const HmmModel &model, std::size_t horizon, double tol);
/// Same check with an explicit kernel (used on reversed kernels).
ErgodicityReport check_ergodicity(const TransitionKernel &kernel, const Distribution &stationary,
                                  std::size_t horizon, double tol);

/// True iff g > 0 everywhere (finite channels) or the declared flag (continuous).
bool check_nondegeneracy(const ObservationChannel &channel);

/**
 * @brief Time-reversed kernel R[x'][x] = pi[x] P[x][x'] / pi[x'].
 *
 * With `restrict_to_support`, rows of zero-mass states become self-loops;
 * otherwise a zero entry of pi throws ZeroStationaryMass.
 */
TransitionKernel time_reverse(const HmmModel &model, bool restrict_to_support = false);
TransitionKernel time_reverse(const TransitionKernel &kernel, const Distribution &stationary,
                              bool restrict_to_support = false);

// =============================================================================
// Simulation
// =============================================================================

struct SimulatedPath {
    std::vector<std::size_t> states;
    ObservationPath observations;
};

/**
 * @brief Draws X_0 ~ start, X_{k+1} ~ P(X_k, .), Y_k ~ Phi(X_k, .).
 *
 * Per step: one uniform for the observation, then one for the next state.
 * Bit-reproducible given (model, start, length, seed).
 */
SimulatedPath simulate(const HmmModel &model, const Distribution &start, std::size_t length,
                       std::uint64_t seed);

/// Model with states relabeled: new state i is old state perm[i].
HmmModel relabel(const HmmModel &model, const std::vector<std::size_t> &perm);
Distribution relabel(const Distribution &dist, const std::vector<std::size_t> &perm);

} // namespace hmmlab
