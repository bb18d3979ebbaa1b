// Filter stability: merging curves, Radon-Nikodym identities between
// differently initialized filters, Lebesgue splits and singular mass.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hmmlab/environment.hpp"
#include "hmmlab/filtering.hpp"
#include "hmmlab/model.hpp"

namespace hmmlab {

/**
 * @brief ||Pi_n^mu - Pi_n^nu||_TV (and D(Pi_n^mu | Pi_n^nu)) for n = 0..N.
 *
 * If either filter hits a zero normalizer at time k, the curve stops after
 * k - 1 and `truncated_at` records k.
 */
struct StabilityCurve {
    std::vector<double> tv_values;
    std::vector<double> entropy_values;
    std::optional<std::size_t> truncated_at;

    std::size_t size() const noexcept { return tv_values.size(); }
};

StabilityCurve stability_curve(const HmmModel &model, const Distribution &mu, const Distribution &nu,
                               const ObservationPath &y);

/**
 * @brief Lambda_n(x) = (d Pi_n^mu / d Pi_n^pi)(x).
 *
 * numerator(x) = sum_{x0} (mu/pi)(x0) P^pi(X_0 = x0 | y_0..y_n, X_n = x),
 * denominator = sum_x Pi_n^pi(x) numerator(x). States the pi-filter cannot
 * reach get Lambda = 0. Requires mu << pi (else SupportViolation) and a
 * finite-alphabet or evaluable channel.
 */
std::vector<double> rn_derivative(const HmmModel &model, const Distribution &mu, const ObservationPath &y,
                                  std::size_t n);

/// | ||Pi_n^mu - Pi_n^pi||_TV - sum_x Pi_n^pi(x) |Lambda_n(x) - 1| |.
double tv_identity_check(const HmmModel &model, const Distribution &mu, const ObservationPath &y,
                         std::size_t n);

/**
 * @brief mu = w nu + (1 - w) nu_perp with nu << rho and nu_perp off support(rho).
 *
 * A side with zero weight is absent.
 */
struct LebesgueSplit {
    double weight = 0.0;
    std::optional<Distribution> continuous_part;
    std::optional<Distribution> singular_part;
};

LebesgueSplit lebesgue_split(const Distribution &mu, const Distribution &rho);

struct SplitIdentityReport {
    /// max_x |Pi^mu(x) - w_n Pi^nu(x) - (1 - w_n) Pi^nu_perp(x)|
    double residual = 0.0;
    /// w_n = P^mu(X_0 in support(rho) | y_0..y_n)
    double posterior_weight = 0.0;
    /// ||Pi^mu - Pi^rho||_TV
    double bound_lhs = 0.0;
    /// ||Pi^nu - Pi^rho||_TV + 2 (1 - w_n)
    double bound_rhs = 0.0;

    bool bound_holds(double tol = 1e-12) const { return bound_lhs <= bound_rhs + tol; }
};

/// Checks the mixture identity of the filter under a Lebesgue split of its prior.
SplitIdentityReport split_filter_identity_check(const HmmModel &model, const Distribution &mu,
                                                const Distribution &rho, const ObservationPath &y,
                                                std::size_t n);

/// Mass that mu P^n puts outside support(pi).
double singular_mass(const HmmModel &model, const Distribution &mu, std::size_t n);

} // namespace hmmlab
