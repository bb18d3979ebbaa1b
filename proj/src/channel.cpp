#include "hmmlab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hmmlab/errors.hpp"

namespace hmmlab {

std::size_t Observation::symbol() const {
    if (const auto *s = std::get_if<std::size_t>(&v_)) return *s;
    throw ModelError("real-valued observation used with a finite-alphabet channel");
}

double Observation::value() const {
    if (const auto *s = std::get_if<std::size_t>(&v_)) return static_cast<double>(*s);
    return std::get<double>(v_);
}

ObservationPath ObservationPath::symbols(const std::vector<std::size_t> &symbols) {
    std::vector<Observation> obs;
    obs.reserve(symbols.size());
    for (auto s : symbols) obs.push_back(Observation::discrete(s));
    return ObservationPath(std::move(obs));
}

ObservationPath ObservationPath::reals(const std::vector<double> &values) {
    std::vector<Observation> obs;
    obs.reserve(values.size());
    for (auto v : values) obs.push_back(Observation::continuous(v));
    return ObservationPath(std::move(obs));
}

ObservationPath ObservationPath::shifted(std::size_t n) const {
    if (n > obs_.size()) throw IndexOutOfRange("shift beyond end of observation path");
    return ObservationPath(std::vector<Observation>(obs_.begin() + static_cast<std::ptrdiff_t>(n), obs_.end()));
}

ObservationPath ObservationPath::prefix(std::size_t n) const {
    if (n >= obs_.size()) throw IndexOutOfRange("prefix beyond end of observation path");
    return ObservationPath(std::vector<Observation>(obs_.begin(), obs_.begin() + static_cast<std::ptrdiff_t>(n + 1)));
}

// -----------------------------------------------------------------------------

ObservationChannel ObservationChannel::finite(std::vector<std::vector<double>> g,
                                              std::vector<double> phi) {
    ObservationChannel c;
    c.kind_ = Kind::finite;
    c.states_ = g.size();
    c.phi_ = std::move(phi);
    const std::size_t m = c.phi_.size();
    c.g_.assign(c.states_ * m, 0.0);
    for (std::size_t x = 0; x < c.states_; ++x) {
        if (g[x].size() != m) throw DimensionMismatch("channel row length differs from alphabet size");
        std::copy(g[x].begin(), g[x].end(), c.g_.begin() + static_cast<std::ptrdiff_t>(x * m));
    }
    return c;
}

ObservationChannel ObservationChannel::finite(std::vector<std::vector<double>> g) {
    const std::size_t m = g.empty() ? 0 : g.front().size();
    return finite(std::move(g), std::vector<double>(m, 1.0));
}

ObservationChannel ObservationChannel::gaussian(std::vector<double> means, double sigma) {
    const double log_norm = -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
    auto logpdf = [means, sigma, log_norm](std::size_t x, double y) {
        const double z = (y - means[x]) / sigma;
        return log_norm - 0.5 * z * z;
    };
    auto sampler = [means, sigma](std::size_t x, Rng &rng) { return means[x] + sigma * rng.gaussian(); };
    ObservationChannel c = continuous(means.size(), logpdf, SamplerFn(sampler), true);
    c.means_ = std::move(means);
    c.sigma_ = sigma;
    return c;
}

ObservationChannel ObservationChannel::continuous(std::size_t states, LogDensityFn log_density,
                                                  std::optional<SamplerFn> sampler,
                                                  bool nondegenerate) {
    ObservationChannel c;
    c.kind_ = Kind::continuous;
    c.states_ = states;
    c.log_density_ = std::move(log_density);
    c.sampler_ = std::move(sampler);
    c.declared_nondegenerate_ = nondegenerate;
    return c;
}

std::vector<std::vector<double>> ObservationChannel::g_rows() const {
    const std::size_t m = phi_.size();
    std::vector<std::vector<double>> rows(states_);
    for (std::size_t x = 0; x < states_; ++x)
        rows[x].assign(g_.begin() + static_cast<std::ptrdiff_t>(x * m),
                       g_.begin() + static_cast<std::ptrdiff_t>((x + 1) * m));
    return rows;
}

double ObservationChannel::density(std::size_t state, const Observation &y) const {
    if (is_finite()) {
        const std::size_t u = y.symbol();
        if (u >= alphabet()) throw IndexOutOfRange("observation symbol outside the alphabet");
        return g(state, u);
    }
    return std::exp(log_density_(state, y.value()));
}

double ObservationChannel::log_density(std::size_t state, const Observation &y) const {
    if (is_finite()) return std::log(density(state, y));
    return log_density_(state, y.value());
}

LikelihoodColumn ObservationChannel::column(const Observation &y) const {
    LikelihoodColumn col;
    col.values.resize(states_);
    if (is_finite()) {
        for (std::size_t x = 0; x < states_; ++x) col.values[x] = density(x, y);
        return col;
    }
    std::vector<double> logs(states_);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < states_; ++x) {
        logs[x] = log_density_(x, y.value());
        top = std::max(top, logs[x]);
    }
    if (!std::isfinite(top)) return col;  // all zero
    col.log_scale = top;
    for (std::size_t x = 0; x < states_; ++x) col.values[x] = std::exp(logs[x] - top);
    return col;
}

Observation ObservationChannel::sample(std::size_t state, Rng &rng) const {
    if (is_finite()) {
        const std::size_t m = alphabet();
        std::vector<double> w(m);
        for (std::size_t u = 0; u < m; ++u) w[u] = g(state, u) * phi_[u];
        return Observation::discrete(rng.categorical(w));
    }
    if (!sampler_) throw MissingSampler("continuous channel has no sampler");
    return Observation::continuous((*sampler_)(state, rng));
}

std::vector<std::string> ObservationChannel::validate() const {
    std::vector<std::string> issues;
    if (states_ == 0) issues.emplace_back("channel has no states");
    if (!is_finite()) {
        if (!log_density_) issues.emplace_back("continuous channel has no density evaluator");
        if (means_ && !(sigma_ > 0.0)) issues.emplace_back("gaussian sigma must be positive");
        return issues;
    }
    const std::size_t m = alphabet();
    if (m == 0) issues.emplace_back("channel alphabet is empty");
    for (std::size_t u = 0; u < m; ++u)
        if (!(phi_[u] > 0.0) || !std::isfinite(phi_[u]))
            issues.push_back("reference weight phi[" + std::to_string(u) + "] must be positive");
    for (std::size_t x = 0; x < states_; ++x) {
        double total = 0.0;
        for (std::size_t u = 0; u < m; ++u) {
            const double v = g(x, u);
            if (!(v >= 0.0) || !std::isfinite(v))
                issues.push_back("density g[" + std::to_string(x) + "][" + std::to_string(u) +
                                 "] is negative or not finite");
            total += v * phi_[u];
        }
        if (m > 0 && std::abs(total - 1.0) > 1e-12) {
            std::ostringstream os;
            os.precision(17);
            os << "channel row " << x << " integrates to " << total << " against phi, not 1";
            issues.push_back(os.str());
        }
    }
    return issues;
}

ObservationChannel ObservationChannel::relabeled(const std::vector<std::size_t> &perm) const {
    if (perm.size() != states_) throw DimensionMismatch("permutation size differs from state count");
    if (is_finite()) {
        const auto rows = g_rows();
        std::vector<std::vector<double>> out(states_);
        for (std::size_t i = 0; i < states_; ++i) out[i] = rows[perm[i]];
        return finite(std::move(out), phi_);
    }
    if (means_) {
        std::vector<double> means(states_);
        for (std::size_t i = 0; i < states_; ++i) means[i] = (*means_)[perm[i]];
        return gaussian(std::move(means), sigma_);
    }
    auto base = log_density_;
    LogDensityFn logpdf = [base, perm](std::size_t x, double y) { return base(perm[x], y); };
    std::optional<SamplerFn> sampler;
    if (sampler_) {
        auto s = *sampler_;
        sampler = SamplerFn([s, perm](std::size_t x, Rng &rng) { return s(perm[x], rng); });
    }
    return continuous(states_, logpdf, sampler, declared_nondegenerate_);
}

ObservationChannel ObservationChannel::rescaled_symbol(std::size_t symbol, double factor) const {
    if (!is_finite()) throw ModelError("rescaled_symbol requires a finite-alphabet channel");
    if (symbol >= alphabet()) throw IndexOutOfRange("symbol outside the alphabet");
    ObservationChannel c = *this;
    for (std::size_t x = 0; x < states_; ++x) c.g_[x * alphabet() + symbol] *= factor;
    c.phi_[symbol] /= factor;
    return c;
}

} // namespace hmmlab
