// Exact nonlinear filter for finite-state hidden Markov models.
#pragma once

#include <cstddef>
#include <vector>

#include "hmmlab/model.hpp"

namespace hmmlab {

/// Result of one measurement update: the normalized law and log of the normalizer.
struct FilterUpdate {
    Distribution state;
    double log_normalizer = 0.0;
};

/**
 * @brief Filter output Pi_0..Pi_N with per-step log normalizers c_0..c_N.
 *
 * Every state is renormalized to sum 1 and the normalizer is kept in log form,
 * so arbitrarily long horizons neither underflow nor overflow. The sum of the
 * log normalizers is the log path likelihood.
 */
struct FilterTrajectory {
    Distribution prior;
    std::vector<Distribution> states;
    std::vector<double> log_normalizers;

    std::size_t horizon() const { return states.size() - 1; }
    double log_likelihood() const;
};

/// Pi_0 = g(., y0) prior / Z. Throws DegenerateFilter when Z = 0.
FilterUpdate filter_init(const HmmModel &model, const Distribution &prior, const Observation &y0);

/// Predict p = current P, then Pi = g(., y) p / Z. `time` only labels errors.
FilterUpdate filter_step(const HmmModel &model, const Distribution &current, const Observation &y,
                         std::size_t time = 0);

/// Runs the recursion along the whole path; DegenerateFilter carries the failing index.
FilterTrajectory filter_run(const HmmModel &model, const Distribution &prior, const ObservationPath &y);

/**
 * @brief One-step-ahead predictive law Upsilon_n.
 *
 * Upsilon_0 is the prior and Upsilon_n = Pi_{n-1} P for 1 <= n <= N+1.
 */
Distribution predictor(const HmmModel &model, const FilterTrajectory &trajectory, std::size_t n);

/**
 * @brief log E^prior[ prod_k g(X_k, y_k) ].
 *
 * Computed by a rescaled backward pass, independently of filter_run. Zero
 * likelihood throws DegenerateFilter.
 */
double path_log_likelihood(const HmmModel &model, const Distribution &prior, const ObservationPath &y);

/**
 * @brief Log of the likelihood ratio prod_k g(pathB_k, y_k) / g(pathA_k, y_k).
 *
 * Times where the two paths agree contribute nothing, which truncates the
 * product at the coupling time. A zero denominator throws UndefinedRatio.
 */
double obs_log_likelihood_ratio(const ObservationChannel &channel,
                                const std::vector<std::size_t> &path_a,
                                const std::vector<std::size_t> &path_b, const ObservationPath &y);

/// D(a | b) = sum_x a_x log(a_x / b_x); +inf when support(a) is not inside support(b).
double relative_entropy(const Distribution &a, const Distribution &b);

} // namespace hmmlab
