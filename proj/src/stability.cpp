#include "hmmlab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "hmmlab/errors.hpp"

namespace hmmlab {

StabilityCurve stability_curve(const HmmModel &model, const Distribution &mu, const Distribution &nu,
                               const ObservationPath &y) {
    if (y.empty()) throw IndexOutOfRange("stability_curve: observation path is empty");
    StabilityCurve curve;
    curve.tv_values.reserve(y.size());
    curve.entropy_values.reserve(y.size());
    Distribution a, b;
    for (std::size_t k = 0; k < y.size(); ++k) {
        try {
            if (k == 0) {
                a = filter_init(model, mu, y[0]).state;
                b = filter_init(model, nu, y[0]).state;
            } else {
                a = filter_step(model, a, y[k], k).state;
                b = filter_step(model, b, y[k], k).state;
            }
        } catch (const DegenerateFilter &e) {
            curve.truncated_at = e.time();
            break;
        }
        curve.tv_values.push_back(tv_distance(a, b));
        curve.entropy_values.push_back(relative_entropy(a, b));
    }
    return curve;
}

namespace {

void require_absolutely_continuous(const Distribution &mu, const Distribution &pi) {
    if (mu.size() != pi.size()) throw DimensionMismatch("prior dimension differs from model");
    for (std::size_t x = 0; x < mu.size(); ++x)
        if (mu[x] > 0.0 && !(pi[x] > 0.0))
            throw SupportViolation("prior charges state " + std::to_string(x) + " outside support(pi)");
}

} // namespace

std::vector<double> rn_derivative(const HmmModel &model, const Distribution &mu, const ObservationPath &y,
                                  std::size_t n) {
    const Distribution &pi = model.stationary;
    require_absolutely_continuous(mu, pi);
    const std::size_t d = model.states();
    std::vector<double> density(d, 0.0);
    for (std::size_t x = 0; x < d; ++x)
        if (pi[x] > 0.0) density[x] = mu[x] / pi[x];

    const PinnedSmoother ps = pinned_smoother(model, y, pi, n);
    std::vector<double> numerator(d, 0.0);
    double denominator = 0.0;
    for (std::size_t x = 0; x < d; ++x) {
        if (!ps.reachable[x]) continue;
        for (std::size_t x0 = 0; x0 < d; ++x0) numerator[x] += density[x0] * ps.rows[x][x0];
        denominator += ps.terminal[x] * numerator[x];
    }
    if (!(denominator > 0.0)) throw DegenerateFilter(n, "rn_derivative: prior excludes the observations");
    for (auto &v : numerator) v /= denominator;
    return numerator;
}

double tv_identity_check(const HmmModel &model, const Distribution &mu, const ObservationPath &y,
                         std::size_t n) {
    const std::vector<double> lambda = rn_derivative(model, mu, y, n);
    const ObservationPath window = y.prefix(n);
    const Distribution pi_filter = filter_run(model, model.stationary, window).states.back();
    const Distribution mu_filter = filter_run(model, mu, window).states.back();
    double via_density = 0.0;
    for (std::size_t x = 0; x < lambda.size(); ++x) via_density += pi_filter[x] * std::abs(lambda[x] - 1.0);
    return std::abs(tv_distance(mu_filter, pi_filter) - via_density);
}

LebesgueSplit lebesgue_split(const Distribution &mu, const Distribution &rho) {
    if (mu.size() != rho.size()) throw DimensionMismatch("lebesgue_split: dimension mismatch");
    const std::size_t d = mu.size();
    std::vector<double> on(d, 0.0), off(d, 0.0);
    double w = 0.0, w_off = 0.0;
    for (std::size_t x = 0; x < d; ++x) {
        if (rho[x] > 0.0) {
            on[x] = mu[x];
            w += mu[x];
        } else {
            off[x] = mu[x];
            w_off += mu[x];
        }
    }
    LebesgueSplit split;
    split.weight = w;
    if (w > 0.0) {
        for (auto &v : on) v /= w;
        split.continuous_part = Distribution(std::move(on));
    }
    if (w_off > 0.0) {
        for (auto &v : off) v /= w_off;
        split.singular_part = Distribution(std::move(off));
    }
    return split;
}

SplitIdentityReport split_filter_identity_check(const HmmModel &model, const Distribution &mu,
                                                const Distribution &rho, const ObservationPath &y,
                                                std::size_t n) {
    const LebesgueSplit split = lebesgue_split(mu, rho);
    const ObservationPath window = y.prefix(n);
    const Distribution mu_filter = filter_run(model, mu, window).states.back();
    const Distribution rho_filter = filter_run(model, rho, window).states.back();

    const Distribution initial = pinned_smoother(model, y, mu, n).initial_law();
    double w_n = 0.0, w_off = 0.0;
    for (std::size_t x = 0; x < initial.size(); ++x)
        (rho[x] > 0.0 ? w_n : w_off) += initial[x];

    // A component with zero posterior weight may legitimately fail to filter.
    auto component = [&](const std::optional<Distribution> &prior, double weight) -> std::optional<Distribution> {
        if (!prior) return std::nullopt;
        try {
            return filter_run(model, *prior, window).states.back();
        } catch (const DegenerateFilter &) {
            if (weight > 0.0) throw;
            return std::nullopt;
        }
    };
    const auto nu_filter = component(split.continuous_part, w_n);
    const auto perp_filter = component(split.singular_part, w_off);

    SplitIdentityReport report;
    report.posterior_weight = w_n;
    for (std::size_t x = 0; x < mu_filter.size(); ++x) {
        double mix = 0.0;
        if (nu_filter) mix += w_n * (*nu_filter)[x];
        if (perp_filter) mix += (1.0 - w_n) * (*perp_filter)[x];
        report.residual = std::max(report.residual, std::abs(mu_filter[x] - mix));
    }
    report.bound_lhs = tv_distance(mu_filter, rho_filter);
    report.bound_rhs = (nu_filter ? tv_distance(*nu_filter, rho_filter) : 2.0) + 2.0 * (1.0 - w_n);
    return report;
}

double singular_mass(const HmmModel &model, const Distribution &mu, std::size_t n) {
    const Distribution law = n_step_marginal(model.kernel, mu, n);
    double mass = 0.0;
    for (std::size_t x = 0; x < law.size(); ++x)
        if (!(model.stationary[x] > 0.0)) mass += law[x];
    return mass;
}

} // namespace hmmlab
