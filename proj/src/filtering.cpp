#include "hmmlab/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmmlab/errors.hpp"
#include "hmmlab/numeric.hpp"

namespace hmmlab {

namespace {

FilterUpdate measurement_update(const HmmModel &model, const Distribution &predicted,
                                const Observation &y, std::size_t time) {
    const std::size_t d = model.states();
    if (predicted.size() != d) throw DimensionMismatch("filter: law dimension differs from model");
    const LikelihoodColumn col = model.channel.column(y);
    std::vector<double> w(d);
    for (std::size_t x = 0; x < d; ++x) w[x] = col.values[x] * predicted[x];
    const double z = numeric::ordered_sum(w);
    if (!(z > 0.0)) throw DegenerateFilter(time, "filter normalizer is zero");
    for (auto &v : w) v /= z;
    return {Distribution(std::move(w)), std::log(z) + col.log_scale};
}

} // namespace

double FilterTrajectory::log_likelihood() const {
    numeric::KahanSum s;
    for (double c : log_normalizers) s.add(c);
    return s.value();
}

FilterUpdate filter_init(const HmmModel &model, const Distribution &prior, const Observation &y0) {
    return measurement_update(model, prior, y0, 0);
}

FilterUpdate filter_step(const HmmModel &model, const Distribution &current, const Observation &y,
                         std::size_t time) {
    return measurement_update(model, propagate(current, model.kernel), y, time);
}

FilterTrajectory filter_run(const HmmModel &model, const Distribution &prior, const ObservationPath &y) {
    if (y.empty()) throw IndexOutOfRange("filter_run: observation path is empty");
    FilterTrajectory traj;
    traj.prior = prior;
    traj.states.reserve(y.size());
    traj.log_normalizers.reserve(y.size());
    FilterUpdate u = filter_init(model, prior, y[0]);
    traj.states.push_back(std::move(u.state));
    traj.log_normalizers.push_back(u.log_normalizer);
    for (std::size_t k = 1; k < y.size(); ++k) {
        u = filter_step(model, traj.states.back(), y[k], k);
        traj.states.push_back(std::move(u.state));
        traj.log_normalizers.push_back(u.log_normalizer);
    }
    return traj;
}

Distribution predictor(const HmmModel &model, const FilterTrajectory &trajectory, std::size_t n) {
    if (n > trajectory.states.size()) throw IndexOutOfRange("predictor: index beyond N + 1");
    if (n == 0) return trajectory.prior;
    return propagate(trajectory.states[n - 1], model.kernel);
}

double path_log_likelihood(const HmmModel &model, const Distribution &prior, const ObservationPath &y) {
    if (y.empty()) throw IndexOutOfRange("path_log_likelihood: observation path is empty");
    const std::size_t d = model.states();
    std::vector<double> b(d, 1.0), next(d);
    numeric::KahanSum log_scale;
    for (std::size_t k = y.horizon(); k >= 1; --k) {
        const LikelihoodColumn col = model.channel.column(y[k]);
        double total = 0.0;
        for (std::size_t x = 0; x < d; ++x) {
            double s = 0.0;
            for (std::size_t to = 0; to < d; ++to) s += model.kernel(x, to) * col.values[to] * b[to];
            next[x] = s;
            total += s;
        }
        if (!(total > 0.0)) throw DegenerateFilter(k, "path has zero likelihood");
        for (std::size_t x = 0; x < d; ++x) b[x] = next[x] / total;
        log_scale.add(std::log(total) + col.log_scale);
    }
    const LikelihoodColumn col0 = model.channel.column(y[0]);
    double l0 = 0.0;
    for (std::size_t x = 0; x < d; ++x) l0 += prior[x] * col0.values[x] * b[x];
    if (!(l0 > 0.0)) throw DegenerateFilter(0, "path has zero likelihood");
    log_scale.add(std::log(l0) + col0.log_scale);
    return log_scale.value();
}

double obs_log_likelihood_ratio(const ObservationChannel &channel,
                                const std::vector<std::size_t> &path_a,
                                const std::vector<std::size_t> &path_b, const ObservationPath &y) {
    if (path_a.size() != path_b.size() || path_a.size() != y.size())
        throw DimensionMismatch("obs_log_likelihood_ratio: path lengths differ");
    numeric::KahanSum total;
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (path_a[k] == path_b[k]) continue;
        const double den = channel.log_density(path_a[k], y[k]);
        if (den == -std::numeric_limits<double>::infinity())
            throw UndefinedRatio("zero density in the denominator at time " + std::to_string(k));
        total.add(channel.log_density(path_b[k], y[k]) - den);
    }
    return total.value();
}

double relative_entropy(const Distribution &a, const Distribution &b) {
    if (a.size() != b.size()) throw DimensionMismatch("relative_entropy: dimension mismatch");
    std::vector<double> terms;
    terms.reserve(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (a[x] == 0.0) continue;
        if (b[x] == 0.0) return std::numeric_limits<double>::infinity();
        terms.push_back(a[x] * std::log(a[x] / b[x]));
    }
    // Rounding can push a true zero slightly negative.
    return std::max(0.0, numeric::ordered_sum(terms));
}

} // namespace hmmlab
