#include "hmmlab/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmmlab/errors.hpp"

namespace hmmlab {

BackwardTable backward_table(const HmmModel &model, const ObservationPath &y) {
    if (y.empty()) throw IndexOutOfRange("backward_table: observation path is empty");
    const std::size_t d = model.states();
    const std::size_t horizon = y.horizon();
    BackwardTable table;
    table.rows.resize(horizon + 1);
    table.log_scales.resize(horizon + 1);
    table.rows[horizon] = Distribution::uniform(d);
    table.log_scales[horizon] = std::log(static_cast<double>(d));

    std::vector<double> raw(d);
    for (std::size_t n = horizon; n >= 1; --n) {
        const LikelihoodColumn col = model.channel.column(y[n]);
        const Distribution &b = table.rows[n];
        double total = 0.0;
        for (std::size_t x = 0; x < d; ++x) {
            double s = 0.0;
            for (std::size_t to = 0; to < d; ++to) s += model.kernel(x, to) * col.values[to] * b[to];
            raw[x] = s;
            total += s;
        }
        if (!(total > 0.0)) throw AllZeroRow(n - 1, "backward row vanished");
        for (auto &v : raw) v /= total;
        table.rows[n - 1] = Distribution(raw);
        table.log_scales[n - 1] = table.log_scales[n] + std::log(total) + col.log_scale;
    }
    return table;
}

// -----------------------------------------------------------------------------

const TransitionKernel &EnvironmentKernelSequence::at(std::size_t n) const {
    if (n == 0 || n > kernels.size()) throw IndexOutOfRange("environment kernel index outside 1..N");
    return kernels[n - 1];
}

bool EnvironmentKernelSequence::row_reachable(std::size_t n, std::size_t x) const {
    if (n == 0 || n > reachable.size()) throw IndexOutOfRange("environment kernel index outside 1..N");
    return reachable[n - 1][x];
}

EnvironmentKernelSequence conditional_kernels(const HmmModel &model, const ObservationPath &y) {
    const BackwardTable table = backward_table(model, y);
    const std::size_t d = model.states();
    EnvironmentKernelSequence seq;
    seq.dim = d;
    seq.path = y;
    seq.kernels.reserve(y.horizon());
    seq.reachable.reserve(y.horizon());
    for (std::size_t n = 1; n <= y.horizon(); ++n) {
        const LikelihoodColumn col = model.channel.column(y[n]);
        const Distribution &b = table.rows[n];
        TransitionKernel k(d);
        std::vector<bool> ok(d, false);
        for (std::size_t x = 0; x < d; ++x) {
            double total = 0.0;
            for (std::size_t to = 0; to < d; ++to) {
                k(x, to) = model.kernel(x, to) * col.values[to] * b[to];
                total += k(x, to);
            }
            if (!(total > 0.0)) {
                for (std::size_t to = 0; to < d; ++to) k(x, to) = 0.0;
                continue;
            }
            ok[x] = true;
            for (std::size_t to = 0; to < d; ++to) k(x, to) /= total;
        }
        seq.kernels.push_back(std::move(k));
        seq.reachable.push_back(std::move(ok));
    }
    return seq;
}

CoupledKernel CoupledKernel::from(const TransitionKernel &k) {
    const std::size_t d = k.dim();
    CoupledKernel q{d, TransitionKernel(d * d)};
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t xp = 0; xp < d; ++xp)
            for (std::size_t z = 0; z < d; ++z)
                for (std::size_t zp = 0; zp < d; ++zp)
                    q.pairs(x * d + xp, z * d + zp) = k(x, z) * k(xp, zp);
    return q;
}

namespace {

Distribution condition_start(const HmmModel &model, const ObservationPath &y, const BackwardTable &table,
                             const Distribution &start) {
    const std::size_t d = model.states();
    if (start.size() != d) throw DimensionMismatch("conditioned start: dimension mismatch");
    const LikelihoodColumn col = model.channel.column(y[0]);
    std::vector<double> w(d);
    double total = 0.0;
    for (std::size_t x = 0; x < d; ++x) {
        w[x] = start[x] * col.values[x] * table.rows[0][x];
        total += w[x];
    }
    if (!(total > 0.0)) throw DegenerateFilter(0, "conditioned start has no mass");
    for (auto &v : w) v /= total;
    return Distribution(std::move(w));
}

void check_start(const EnvironmentKernelSequence &kernels, std::size_t z) {
    if (z >= kernels.dim) throw IndexOutOfRange("start state out of range");
    if (kernels.horizon() >= 1 && !kernels.row_reachable(1, z))
        throw UnreachableStart("start state " + std::to_string(z) + " has no future under the window");
}

} // namespace

Distribution conditioned_marginal(const HmmModel &model, const ObservationPath &y,
                                  const Distribution &start, std::size_t n) {
    if (y.empty() || n > y.horizon()) throw IndexOutOfRange("conditioned_marginal: n beyond N");
    const BackwardTable table = backward_table(model, y);
    Distribution law = condition_start(model, y, table, start);
    if (n == 0) return law;
    const EnvironmentKernelSequence seq = conditional_kernels(model, y);
    for (std::size_t k = 1; k <= n; ++k) law = propagate(law, seq.at(k));
    return law;
}

std::vector<Distribution> smoothed_marginals(const HmmModel &model, const Distribution &prior,
                                             const ObservationPath &y) {
    const FilterTrajectory traj = filter_run(model, prior, y);
    const BackwardTable table = backward_table(model, y);
    const std::size_t d = model.states();
    std::vector<Distribution> out;
    out.reserve(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        std::vector<double> w(d);
        double total = 0.0;
        for (std::size_t x = 0; x < d; ++x) {
            w[x] = traj.states[k][x] * table.rows[k][x];
            total += w[x];
        }
        for (auto &v : w) v /= total;
        out.emplace_back(std::move(w));
    }
    return out;
}

// -----------------------------------------------------------------------------

BetaCurve beta_curve(const EnvironmentKernelSequence &kernels, std::size_t z, std::size_t z_prime) {
    check_start(kernels, z);
    check_start(kernels, z_prime);
    const std::size_t d = kernels.dim;
    BetaCurve curve{z, z_prime, {}};
    curve.values.reserve(kernels.horizon());
    Distribution a = Distribution::point_mass(d, z);
    Distribution b = Distribution::point_mass(d, z_prime);
    for (std::size_t n = 1; n <= kernels.horizon(); ++n) {
        a = propagate(a, kernels.at(n));
        b = propagate(b, kernels.at(n));
        curve.values.push_back(tv_distance(a, b));
    }
    return curve;
}

BetaCurve beta_curve(const HmmModel &model, const ObservationPath &y, std::size_t z, std::size_t z_prime) {
    return beta_curve(conditional_kernels(model, y), z, z_prime);
}

std::optional<std::size_t> irreducibility_check(const EnvironmentKernelSequence &kernels,
                                                std::size_t z, std::size_t z_prime) {
    check_start(kernels, z);
    check_start(kernels, z_prime);
    const std::size_t d = kernels.dim;
    Distribution a = Distribution::point_mass(d, z);
    Distribution b = Distribution::point_mass(d, z_prime);
    for (std::size_t n = 1; n <= kernels.horizon(); ++n) {
        a = propagate(a, kernels.at(n));
        b = propagate(b, kernels.at(n));
        for (std::size_t x = 0; x < d; ++x)
            if (a[x] > 0.0 && b[x] > 0.0) return n;
    }
    return std::nullopt;
}

double submartingale_check(const EnvironmentKernelSequence &kernels, std::size_t horizon) {
    if (horizon + 1 > kernels.horizon())
        throw IndexOutOfRange("submartingale_check: horizon + 1 must not exceed N");
    const std::size_t d = kernels.dim;

    // direct[z][m]  = delta_z K_1 ... K_m       (m = 1..horizon)
    // shifted[w][m] = delta_w K_2 ... K_{m+1}   (m = 0..horizon-1)
    std::vector<std::vector<Distribution>> direct(d), shifted(d);
    for (std::size_t s = 0; s < d; ++s) {
        Distribution a = Distribution::point_mass(d, s);
        Distribution b = Distribution::point_mass(d, s);
        direct[s].push_back(a);
        shifted[s].push_back(b);
        for (std::size_t m = 1; m <= horizon; ++m) {
            a = propagate(a, kernels.at(m));
            direct[s].push_back(a);
            if (m < horizon) {
                b = propagate(b, kernels.at(m + 1));
                shifted[s].push_back(b);
            }
        }
    }

    const CoupledKernel q = CoupledKernel::from(kernels.at(1));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < d; ++z) {
        if (!kernels.row_reachable(1, z)) continue;
        for (std::size_t zp = 0; zp < d; ++zp) {
            if (!kernels.row_reachable(1, zp)) continue;
            for (std::size_t n = 0; n < horizon; ++n) {
                const double lhs = tv_distance(direct[z][n + 1], direct[zp][n + 1]);
                double rhs = 0.0;
                for (std::size_t w = 0; w < d; ++w)
                    for (std::size_t wp = 0; wp < d; ++wp) {
                        const double weight = q(z, zp, w, wp);
                        if (weight == 0.0) continue;
                        rhs += weight * tv_distance(shifted[w][n], shifted[wp][n]);
                    }
                worst = std::max(worst, lhs - rhs);
            }
        }
    }
    return worst;
}

// -----------------------------------------------------------------------------

Distribution PinnedSmoother::initial_law() const {
    const std::size_t d = terminal.size();
    std::vector<double> w(d, 0.0);
    for (std::size_t x = 0; x < d; ++x) {
        if (!reachable[x]) continue;
        for (std::size_t x0 = 0; x0 < d; ++x0) w[x0] += terminal[x] * rows[x][x0];
    }
    return Distribution(std::move(w));
}

namespace {

/// Joint law of (X_0, X_k) given y_0..y_k, row-major [x0 * d + x].
class JointForward {
public:
    JointForward(const HmmModel &model, const Distribution &prior, const Observation &y0)
        : model_(model), d_(model.states()), joint_(d_ * d_, 0.0), next_(d_ * d_) {
        if (prior.size() != d_) throw DimensionMismatch("pinned smoother: prior dimension mismatch");
        const LikelihoodColumn col = model.channel.column(y0);
        double total = 0.0;
        for (std::size_t x = 0; x < d_; ++x) {
            joint_[x * d_ + x] = prior[x] * col.values[x];
            total += joint_[x * d_ + x];
        }
        normalize(total, 0);
    }

    void advance(const Observation &y, std::size_t time) {
        const LikelihoodColumn col = model_.channel.column(y);
        double total = 0.0;
        for (std::size_t x0 = 0; x0 < d_; ++x0)
            for (std::size_t x = 0; x < d_; ++x) {
                double s = 0.0;
                for (std::size_t xp = 0; xp < d_; ++xp) s += joint_[x0 * d_ + xp] * model_.kernel(xp, x);
                next_[x0 * d_ + x] = s * col.values[x];
                total += next_[x0 * d_ + x];
            }
        joint_.swap(next_);
        normalize(total, time);
    }

    PinnedSmoother snapshot() const {
        PinnedSmoother out;
        out.rows.resize(d_);
        out.reachable.assign(d_, false);
        std::vector<double> terminal(d_, 0.0);
        for (std::size_t x = 0; x < d_; ++x) {
            std::vector<double> row(d_);
            double col_sum = 0.0;
            for (std::size_t x0 = 0; x0 < d_; ++x0) {
                row[x0] = joint_[x0 * d_ + x];
                col_sum += row[x0];
            }
            terminal[x] = col_sum;
            if (col_sum > 0.0) {
                out.reachable[x] = true;
                for (auto &v : row) v /= col_sum;
            }
            out.rows[x] = Distribution(std::move(row));
        }
        out.terminal = Distribution(std::move(terminal));
        return out;
    }

private:
    void normalize(double total, std::size_t time) {
        if (!(total > 0.0)) throw DegenerateFilter(time, "pinned smoother: observations impossible");
        for (auto &v : joint_) v /= total;
    }

    const HmmModel &model_;
    std::size_t d_;
    std::vector<double> joint_;
    std::vector<double> next_;
};

double merge_value(const PinnedSmoother &ps) {
    const Distribution initial = ps.initial_law();
    double total = 0.0;
    for (std::size_t x = 0; x < ps.terminal.size(); ++x)
        if (ps.reachable[x]) total += ps.terminal[x] * tv_distance(ps.rows[x], initial);
    return total;
}

} // namespace

PinnedSmoother pinned_smoother(const HmmModel &model, const ObservationPath &y, const Distribution &prior,
                               std::size_t n) {
    if (y.empty() || n > y.horizon()) throw IndexOutOfRange("pinned_smoother: n beyond N");
    JointForward joint(model, prior, y[0]);
    for (std::size_t k = 1; k <= n; ++k) joint.advance(y[k], k);
    return joint.snapshot();
}

double merge_distance(const HmmModel &model, const ObservationPath &y, const Distribution &prior,
                      std::size_t n) {
    return merge_value(pinned_smoother(model, y, prior, n));
}

std::vector<double> merge_distance_curve(const HmmModel &model, const ObservationPath &y,
                                         const Distribution &prior) {
    if (y.empty()) throw IndexOutOfRange("merge_distance_curve: observation path is empty");
    std::vector<double> out;
    out.reserve(y.size());
    JointForward joint(model, prior, y[0]);
    out.push_back(merge_value(joint.snapshot()));
    for (std::size_t k = 1; k < y.size(); ++k) {
        joint.advance(y[k], k);
        out.push_back(merge_value(joint.snapshot()));
    }
    return out;
}

double kernel_window_drift(const HmmModel &model, const ObservationPath &y, std::size_t window,
                           std::size_t extension, std::size_t upto) {
    if (upto > window) throw IndexOutOfRange("kernel_window_drift: upto beyond window");
    const auto shorter = conditional_kernels(model, y.prefix(window));
    const auto longer = conditional_kernels(model, y.prefix(window + extension));
    double worst = 0.0;
    for (std::size_t n = 1; n <= upto; ++n)
        for (std::size_t x = 0; x < shorter.dim; ++x) {
            if (!shorter.row_reachable(n, x) || !longer.row_reachable(n, x)) continue;
            for (std::size_t to = 0; to < shorter.dim; ++to)
                worst = std::max(worst, std::abs(shorter.at(n)(x, to) - longer.at(n)(x, to)));
        }
    return worst;
}

} // namespace hmmlab
