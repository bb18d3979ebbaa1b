#include "hmmlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hmmlab/errors.hpp"

namespace hmmlab {

std::vector<std::string> validate_model(const HmmModel &model) {
    std::vector<std::string> report;
    for (auto &msg : model.kernel.validate()) report.push_back(std::move(msg));
    for (auto &msg : model.stationary.validate()) report.push_back("stationary: " + msg);
    for (auto &msg : model.channel.validate()) report.push_back("channel: " + msg);

    const std::size_t d = model.kernel.dim();
    if (model.stationary.size() != d) {
        report.emplace_back("stationary law dimension differs from kernel dimension");
        return report;
    }
    if (model.channel.states() != d) {
        report.emplace_back("channel state count differs from kernel dimension");
        return report;
    }
    if (d > 0) {
        const double drift = tv_distance(propagate(model.stationary, model.kernel), model.stationary);
        if (!(drift <= kStationaryTolerance)) {
            std::ostringstream os;
            os << "stationary law is not invariant: ||pi P - pi||_TV = " << drift;
            report.push_back(os.str());
        }
    }
    return report;
}

HmmModel make_model(TransitionKernel kernel, ObservationChannel channel, std::string label,
                    std::optional<Distribution> stationary) {
    if (auto issues = kernel.validate(); !issues.empty())
        throw ModelError("invalid model '" + label + "': " + issues.front());
    HmmModel model{std::move(kernel), Distribution{}, std::move(channel), std::move(label)};
    model.stationary = stationary ? std::move(*stationary) : stationary_distribution(model.kernel);
    if (auto issues = validate_model(model); !issues.empty()) {
        std::string msg = "invalid model '" + model.label + "':";
        for (const auto &i : issues) msg += "\n  " + i;
        throw ModelError(msg);
    }
    return model;
}

// -----------------------------------------------------------------------------

namespace {

Distribution settle(const TransitionKernel &kernel, Distribution p, double tol,
                    std::size_t max_iterations) {
    const std::size_t d = kernel.dim();
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iterations; ++it) {
        Distribution next = propagate(p, kernel);
        const double residual = tv_distance(next, p);
        // Past tol, keep polishing while the residual still shrinks.
        if (residual <= tol && (residual == 0.0 || residual >= previous)) return p;
        if (residual <= tol && it + 1 == max_iterations) return p;
        previous = residual;
        for (std::size_t i = 0; i < d; ++i) p[i] = 0.5 * (p[i] + next[i]);
    }
    throw NoConvergence("stationary_distribution: no convergence within iteration cap");
}

/// States of the unique closed communicating class; NonUniqueStationary if there are several.
std::vector<bool> recurrent_class(const TransitionKernel &kernel) {
    const std::size_t d = kernel.dim();
    std::vector<std::vector<bool>> reach(d, std::vector<bool>(d, false));
    for (std::size_t x = 0; x < d; ++x) {
        reach[x][x] = true;
        for (std::size_t y = 0; y < d; ++y)
            if (kernel(x, y) > 0.0) reach[x][y] = true;
    }
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t x = 0; x < d; ++x)
            if (reach[x][k])
                for (std::size_t y = 0; y < d; ++y)
                    if (reach[k][y]) reach[x][y] = true;

    std::vector<bool> recurrent(d, false);
    std::optional<std::size_t> representative;
    for (std::size_t x = 0; x < d; ++x) {
        bool closed = true;
        for (std::size_t y = 0; y < d && closed; ++y)
            if (reach[x][y] && !reach[y][x]) closed = false;
        if (!closed) continue;
        if (representative && !reach[*representative][x])
            throw NonUniqueStationary("stationary_distribution: kernel has several closed classes");
        representative = representative.value_or(x);
        recurrent[x] = true;
    }
    return recurrent;
}

} // namespace

Distribution stationary_distribution(const TransitionKernel &kernel, double tol,
                                     std::size_t max_iterations) {
    const std::size_t d = kernel.dim();
    if (auto issues = kernel.validate(); !issues.empty())
        throw ModelError("stationary_distribution: " + issues.front());
    // Starting on the closed class keeps transient states at exactly zero.
    const std::vector<bool> recurrent = recurrent_class(kernel);
    std::vector<double> start(d, 0.0);
    const auto size = static_cast<double>(std::count(recurrent.begin(), recurrent.end(), true));
    for (std::size_t x = 0; x < d; ++x)
        if (recurrent[x]) start[x] = 1.0 / size;
    Distribution reference = settle(kernel, Distribution(std::move(start)), tol, max_iterations);
    // Clean the last rounding so that the weights sum to one.
    double total = 0.0;
    for (double w : reference.weights()) total += w;
    for (std::size_t i = 0; i < d; ++i) reference[i] /= total;
    return reference;
}

Distribution n_step_marginal(const TransitionKernel &kernel, const Distribution &start, std::size_t n) {
    Distribution p = start;
    for (std::size_t k = 0; k < n; ++k) p = propagate(p, kernel);
    return p;
}

ErgodicityReport check_ergodicity(const TransitionKernel &kernel, const Distribution &stationary,
                                  std::size_t horizon, double tol) {
    const std::size_t d = kernel.dim();
    if (stationary.size() != d) throw DimensionMismatch("check_ergodicity: dimension mismatch");
    ErgodicityReport report;
    report.decay.assign(horizon + 1, 0.0);
    std::vector<Distribution> laws;
    std::vector<std::size_t> starts;
    for (std::size_t z = 0; z < d; ++z)
        if (stationary[z] > 0.0) {
            starts.push_back(z);
            laws.push_back(Distribution::point_mass(d, z));
        }
    for (std::size_t n = 0; n <= horizon; ++n) {
        double worst = 0.0;
        for (auto &law : laws) {
            if (n > 0) law = propagate(law, kernel);
            worst = std::max(worst, tv_distance(law, stationary));
        }
        report.decay[n] = worst;
        if (worst <= tol) report.ergodic = true;
    }
    return report;
}

ErgodicityReport check_ergodicity(const HmmModel &model, std::size_t horizon, double tol) {
    return check_ergodicity(model.kernel, model.stationary, horizon, tol);
}

bool check_nondegeneracy(const ObservationChannel &channel) {
    if (!channel.is_finite()) return channel.declared_nondegenerate();
    for (std::size_t x = 0; x < channel.states(); ++x)
        for (std::size_t u = 0; u < channel.alphabet(); ++u)
            if (!(channel.g(x, u) > 0.0)) return false;
    return true;
}

TransitionKernel time_reverse(const TransitionKernel &kernel, const Distribution &stationary,
                              bool restrict_to_support) {
    const std::size_t d = kernel.dim();
    if (stationary.size() != d) throw DimensionMismatch("time_reverse: dimension mismatch");
    TransitionKernel rev(d);
    for (std::size_t to = 0; to < d; ++to) {
        if (!(stationary[to] > 0.0)) {
            if (!restrict_to_support)
                throw ZeroStationaryMass("time_reverse: stationary law has a zero entry");
            rev(to, to) = 1.0;
            continue;
        }
        for (std::size_t from = 0; from < d; ++from)
            rev(to, from) = stationary[from] * kernel(from, to) / stationary[to];
    }
    return rev;
}

TransitionKernel time_reverse(const HmmModel &model, bool restrict_to_support) {
    return time_reverse(model.kernel, model.stationary, restrict_to_support);
}

SimulatedPath simulate(const HmmModel &model, const Distribution &start, std::size_t length,
                       std::uint64_t seed) {
    if (length == 0) throw IndexOutOfRange("simulate: length must be at least 1");
    if (start.size() != model.states()) throw DimensionMismatch("simulate: start law dimension mismatch");
    if (!model.channel.has_sampler()) throw MissingSampler("simulate: continuous channel has no sampler");
    Rng rng(seed);
    SimulatedPath out;
    out.states.reserve(length);
    std::size_t x = rng.categorical(start.weights());
    for (std::size_t k = 0; k < length; ++k) {
        out.states.push_back(x);
        out.observations.push_back(model.channel.sample(x, rng));
        if (k + 1 < length) x = rng.categorical(model.kernel.row(x));
    }
    return out;
}

Distribution relabel(const Distribution &dist, const std::vector<std::size_t> &perm) {
    if (perm.size() != dist.size()) throw DimensionMismatch("relabel: permutation size mismatch");
    std::vector<double> w(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) w[i] = dist[perm[i]];
    return Distribution(std::move(w));
}

HmmModel relabel(const HmmModel &model, const std::vector<std::size_t> &perm) {
    const std::size_t d = model.states();
    if (perm.size() != d) throw DimensionMismatch("relabel: permutation size mismatch");
    TransitionKernel k(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) k(i, j) = model.kernel(perm[i], perm[j]);
    return HmmModel{std::move(k), relabel(model.stationary, perm), model.channel.relabeled(perm),
                    model.label};
}

} // namespace hmmlab
