// Probability rows and row-stochastic kernels over a finite state space.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hmmlab {

/// Tolerance for "sums to one" checks on distributions and kernel rows.
inline constexpr double kSumTolerance = 1e-12;

// =============================================================================
// Distribution
// =============================================================================

/**
 * @brief Probability weights over states 0..d-1.
 *
 * Construction does not validate; call `validate()` or `checked()` where the
 * invariants (nonnegative, sum to one within kSumTolerance) must hold. Raw
 * construction is kept open because validators need to see bad data.
 */
class Distribution {
public:
    Distribution() = default;
    explicit Distribution(std::vector<double> weights) : w_(std::move(weights)) {}
    Distribution(std::initializer_list<double> weights) : w_(weights) {}

    /// Validating constructor; throws ModelError on a violated invariant.
    static Distribution checked(std::vector<double> weights);
    static Distribution uniform(std::size_t d);
    static Distribution point_mass(std::size_t d, std::size_t state);

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    double &operator[](std::size_t i) { return w_[i]; }

    std::span<const double> weights() const noexcept { return w_; }
    const std::vector<double> &vec() const noexcept { return w_; }

    /// Empty when valid, otherwise one message per violated invariant.
    std::vector<std::string> validate() const;

    bool operator==(const Distribution &) const = default;

private:
    std::vector<double> w_;
};

/**
 * @brief Total variation distance, full-variation convention.
 *
 * Returns sum_x |a_x - b_x|, so the range is [0, 2] and disjoint supports give
 * exactly 2. Many texts halve this; nothing in hmmlab does.
 */
double tv_distance(const Distribution &a, const Distribution &b);

/// Support of `a`: states with strictly positive weight.
std::vector<bool> support(const Distribution &a);

// =============================================================================
// TransitionKernel
// =============================================================================

/**
 * @brief Square d x d table; row x is the law of the next state given x.
 *
 * Stored row-major. Like Distribution, it does not self-validate: the
 * conditional kernels of the random-environment module leave unreachable rows
 * as zeros and flag them instead.
 */
class TransitionKernel {
public:
    TransitionKernel() = default;
    explicit TransitionKernel(std::size_t d) : d_(d), p_(d * d, 0.0) {}
    explicit TransitionKernel(const std::vector<std::vector<double>> &rows);
    TransitionKernel(std::initializer_list<std::initializer_list<double>> rows);

    static TransitionKernel identity(std::size_t d);
    /// Deterministic cycle x -> x + 1 mod d.
    static TransitionKernel cycle(std::size_t d);

    std::size_t dim() const noexcept { return d_; }
    double operator()(std::size_t from, std::size_t to) const { return p_[from * d_ + to]; }
    double &operator()(std::size_t from, std::size_t to) { return p_[from * d_ + to]; }

    std::span<const double> row(std::size_t from) const {
        return {p_.data() + from * d_, d_};
    }
    std::span<double> row(std::size_t from) { return {p_.data() + from * d_, d_}; }
    Distribution row_distribution(std::size_t from) const;

    std::vector<std::vector<double>> to_rows() const;
    std::vector<std::string> validate() const;

    bool operator==(const TransitionKernel &) const = default;

private:
    std::size_t d_ = 0;
    std::vector<double> p_;
};

/// a * P (one step of the chain), summed in permutation-invariant order.
Distribution propagate(const Distribution &a, const TransitionKernel &p);

/// Matrix product A * B.
TransitionKernel compose(const TransitionKernel &a, const TransitionKernel &b);

} // namespace hmmlab
