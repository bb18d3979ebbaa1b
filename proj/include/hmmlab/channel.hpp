// Observation values, observation paths and observation channels.
#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hmmlab/rng.hpp"

namespace hmmlab {

// =============================================================================
// Observation / ObservationPath
// =============================================================================

/// One observed value: an alphabet index (finite channels) or a real number.
class Observation {
public:
    static Observation discrete(std::size_t symbol) { return Observation(symbol); }
    static Observation continuous(double value) { return Observation(value); }

    bool is_discrete() const noexcept { return std::holds_alternative<std::size_t>(v_); }
    /// Alphabet index; throws ModelError for a real-valued observation.
    std::size_t symbol() const;
    /// Real value; a discrete symbol converts to its index.
    double value() const;

    bool operator==(const Observation &) const = default;

private:
    explicit Observation(std::size_t s) : v_(s) {}
    explicit Observation(double v) : v_(v) {}
    std::variant<std::size_t, double> v_;
};

/// Observation record y_0..y_N.
class ObservationPath {
public:
    ObservationPath() = default;
    explicit ObservationPath(std::vector<Observation> obs) : obs_(std::move(obs)) {}

    static ObservationPath symbols(const std::vector<std::size_t> &symbols);
    static ObservationPath symbols(std::initializer_list<std::size_t> symbols) {
        return ObservationPath::symbols(std::vector<std::size_t>(symbols));
    }
    static ObservationPath reals(const std::vector<double> &values);

    std::size_t size() const noexcept { return obs_.size(); }
    bool empty() const noexcept { return obs_.empty(); }
    /// Final time index N (size - 1).
    std::size_t horizon() const { return obs_.size() - 1; }
    const Observation &operator[](std::size_t k) const { return obs_[k]; }
    const std::vector<Observation> &values() const noexcept { return obs_; }

    /// The path with the first `n` observations dropped (time shift by n).
    ObservationPath shifted(std::size_t n) const;
    /// y_0..y_n inclusive.
    ObservationPath prefix(std::size_t n) const;

    void push_back(Observation o) { obs_.push_back(o); }

    bool operator==(const ObservationPath &) const = default;

private:
    std::vector<Observation> obs_;
};

// =============================================================================
// ObservationChannel
// =============================================================================

/**
 * @brief The vector g(., y) for one observation, stored with a log offset.
 *
 * g(x, y) = values[x] * exp(log_scale). Finite channels use log_scale = 0 and
 * the raw table entries; continuous channels shift by the largest log density
 * so that far-out observations do not underflow.
 */
struct LikelihoodColumn {
    std::vector<double> values;
    double log_scale = 0.0;
};

/**
 * @brief Observation law Phi(x, .) given by a density g(x, .) against a
 * reference measure.
 *
 * Finite-alphabet channels hold g[x][u] and reference weights phi[u] > 0 with
 * sum_u g[x][u] phi[u] = 1. Continuous channels hold a log-density evaluator
 * and, optionally, a sampler. The reference-measure constant cancels in every
 * filter normalization, so continuous densities need not be normalized.
 */
class ObservationChannel {
public:
    enum class Kind { finite, continuous };

    using LogDensityFn = std::function<double(std::size_t state, double y)>;
    using SamplerFn = std::function<double(std::size_t state, Rng &rng)>;

    ObservationChannel() = default;

    static ObservationChannel finite(std::vector<std::vector<double>> g, std::vector<double> phi);
    /// Finite channel with phi = 1 on every symbol.
    static ObservationChannel finite(std::vector<std::vector<double>> g);
    /// Gaussian emissions N(means[x], sigma^2); sampler included.
    static ObservationChannel gaussian(std::vector<double> means, double sigma);
    static ObservationChannel continuous(std::size_t states, LogDensityFn log_density,
                                         std::optional<SamplerFn> sampler,
                                         bool nondegenerate);

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::finite; }
    std::size_t states() const noexcept { return states_; }
    /// Alphabet size m (finite channels; 0 otherwise).
    std::size_t alphabet() const noexcept { return phi_.size(); }

    double g(std::size_t state, std::size_t symbol) const { return g_[state * phi_.size() + symbol]; }
    const std::vector<double> &phi() const noexcept { return phi_; }
    std::vector<std::vector<double>> g_rows() const;

    /// Gaussian parameters when built by `gaussian()`.
    const std::optional<std::vector<double>> &gaussian_means() const noexcept { return means_; }
    double gaussian_sigma() const noexcept { return sigma_; }

    /// Nondegeneracy flag declared at construction (continuous channels only).
    bool declared_nondegenerate() const noexcept { return declared_nondegenerate_; }

    double density(std::size_t state, const Observation &y) const;
    /// log g(state, y); -inf for a zero density.
    double log_density(std::size_t state, const Observation &y) const;
    LikelihoodColumn column(const Observation &y) const;

    bool has_sampler() const noexcept { return is_finite() || sampler_.has_value(); }
    /// Y ~ Phi(state, .). Throws MissingSampler for a continuous channel without sampler.
    Observation sample(std::size_t state, Rng &rng) const;

    std::vector<std::string> validate() const;

    /// Copy with states relabeled: new state i is old state perm[i].
    ObservationChannel relabeled(const std::vector<std::size_t> &perm) const;
    /// Copy with g(., symbol) multiplied by `factor` (and phi divided by it).
    ObservationChannel rescaled_symbol(std::size_t symbol, double factor) const;

private:
    Kind kind_ = Kind::finite;
    std::size_t states_ = 0;
    std::vector<double> g_;
    std::vector<double> phi_;
    LogDensityFn log_density_;
    std::optional<SamplerFn> sampler_;
    std::optional<std::vector<double>> means_;
    double sigma_ = 0.0;
    bool declared_nondegenerate_ = false;
};

} // namespace hmmlab
