// The signal conditioned on an observation window: backward variables,
// conditional (environment) kernels, smoothing laws and the weak-ergodicity
// functional beta_n.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hmmlab/filtering.hpp"
#include "hmmlab/model.hpp"

namespace hmmlab {

// =============================================================================
// Backward variables
// =============================================================================

/**
 * @brief B_n(x) = E[ prod_{k=n+1}^{N} g(X_k, y_k) | X_n = x ], n = 0..N.
 *
 * Row n is stored normalized to sum 1; the true value is
 * rows[n][x] * exp(log_scales[n]) (the scale is cumulative, not per step).
 * B_N is the all-ones row, stored as uniform with log_scales[N] = log d.
 */
struct BackwardTable {
    std::vector<Distribution> rows;
    std::vector<double> log_scales;

    std::size_t horizon() const { return rows.size() - 1; }
};

/// Throws AllZeroRow when some B_n vanishes (the window is impossible).
BackwardTable backward_table(const HmmModel &model, const ObservationPath &y);

// =============================================================================
// Environment kernels
// =============================================================================

/**
 * @brief K_1..K_N with K_n(x, .) = P(X_n in . | X_{n-1} = x, y_0..y_N).
 *
 * Rows whose normalizer vanishes (x cannot occur at time n-1 given the window)
 * are left as zeros and flagged unreachable.
 */
struct EnvironmentKernelSequence {
    std::size_t dim = 0;
    std::vector<TransitionKernel> kernels;
    std::vector<std::vector<bool>> reachable;
    ObservationPath path;

    std::size_t horizon() const noexcept { return kernels.size(); }
    /// K_n for 1 <= n <= N.
    const TransitionKernel &at(std::size_t n) const;
    bool row_reachable(std::size_t n, std::size_t x) const;
};

EnvironmentKernelSequence conditional_kernels(const HmmModel &model, const ObservationPath &y);

/**
 * @brief Product transition on state pairs under a common environment step.
 *
 * Q[(x, x')][(z, z')] = K[x][z] K[x'][z'], with pair (x, x') at index x*d + x'.
 */
struct CoupledKernel {
    std::size_t states = 0;
    TransitionKernel pairs;

    static CoupledKernel from(const TransitionKernel &k);
    double operator()(std::size_t x, std::size_t xp, std::size_t z, std::size_t zp) const {
        return pairs(x * states + xp, z * states + zp);
    }
};

/**
 * @brief Law of X_n given the window, started from `start`.
 *
 * The start is conditioned at time 0 (multiplied by g(., y_0) B_0) and then
 * propagated through K_1..K_n. Throws DegenerateFilter if the conditioned
 * start has no mass.
 */
Distribution conditioned_marginal(const HmmModel &model, const ObservationPath &y,
                                  const Distribution &start, std::size_t n);

/// P(X_k | y_0..y_N) for k = 0..N via forward filter times backward variables.
std::vector<Distribution> smoothed_marginals(const HmmModel &model, const Distribution &prior,
                                             const ObservationPath &y);

// =============================================================================
// Weak ergodicity and irreducibility
// =============================================================================

/// beta_n(z, z', y) for n = 1..N; values[n - 1] holds beta_n.
struct BetaCurve {
    std::size_t z = 0;
    std::size_t z_prime = 0;
    std::vector<double> values;

    double at(std::size_t n) const { return values.at(n - 1); }
};

/**
 * @brief ||P_{z,y}(X_n in .) - P_{z',y}(X_n in .)||_TV for n = 1..N.
 *
 * The starts are pinned point masses pushed through K_1..K_n; there is no
 * time-0 measurement update of the start, so g(z, y_0) may be zero. Throws
 * UnreachableStart when a start has no future under the window (B_0 = 0).
 */
BetaCurve beta_curve(const EnvironmentKernelSequence &kernels, std::size_t z, std::size_t z_prime);
BetaCurve beta_curve(const HmmModel &model, const ObservationPath &y, std::size_t z, std::size_t z_prime);

/// Smallest n <= N at which the two pinned laws share a state, or nullopt.
std::optional<std::size_t> irreducibility_check(const EnvironmentKernelSequence &kernels,
                                                std::size_t z, std::size_t z_prime);

/**
 * @brief Largest value of beta_{n+1}(z, z') - sum Q_1[(z,z')][(w,w')] beta_n^shift(w, w').
 *
 * beta^shift conditions from time 1 onward (kernels K_2, K_3, ...). Covers all
 * reachable pairs and n = 0..horizon-1; requires horizon + 1 <= N. The
 * submartingale inequality says the result is <= 0 up to rounding.
 */
double submartingale_check(const EnvironmentKernelSequence &kernels, std::size_t horizon);

// =============================================================================
// Pinned smoothing
// =============================================================================

/**
 * @brief P(X_0 = . | y_0..y_n, X_n = x) for each terminal state x.
 *
 * `terminal` is the law of X_n given y_0..y_n (the filter) and `rows[x]` the
 * pinned law of X_0. Rows for terminal states of zero mass are flagged.
 */
struct PinnedSmoother {
    std::vector<Distribution> rows;
    std::vector<bool> reachable;
    Distribution terminal;

    /// P(X_0 | y_0..y_n): the rows mixed against the terminal law.
    Distribution initial_law() const;
};

/// Exact forward pass over the joint (X_0, X_k) table.
PinnedSmoother pinned_smoother(const HmmModel &model, const ObservationPath &y,
                               const Distribution &prior, std::size_t n);

/// sum_x Pi_n(x) ||P(X_0 | y, X_n = x) - P(X_0 | y)||_TV.
double merge_distance(const HmmModel &model, const ObservationPath &y, const Distribution &prior,
                      std::size_t n);

/// merge_distance for n = 0..N in a single forward pass.
std::vector<double> merge_distance_curve(const HmmModel &model, const ObservationPath &y,
                                         const Distribution &prior);

/**
 * @brief How much K_1..K_upto move when the window grows from `window` to
 * `window + extension`.
 *
 * Returns the largest absolute entry difference over rows reachable in both.
 */
double kernel_window_drift(const HmmModel &model, const ObservationPath &y, std::size_t window,
                           std::size_t extension, std::size_t upto);

} // namespace hmmlab
