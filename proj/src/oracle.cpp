#include "hmmlab/oracle.hpp"

#include "hmmlab/errors.hpp"
#include "hmmlab/numeric.hpp"

namespace hmmlab::oracle {

void JointTable::decode(std::size_t code, std::vector<std::size_t> &path) const {
    path.resize(length_);
    for (std::size_t k = 0; k < length_; ++k) {
        path[k] = code % d_;
        code /= d_;
    }
}

JointTable joint_table(const HmmModel &model, const Distribution &prior, const ObservationPath &y) {
    if (!model.channel.is_finite()) throw ModelError("joint_table: continuous channels cannot be enumerated");
    if (y.empty()) throw IndexOutOfRange("joint_table: observation path is empty");
    const std::size_t d = model.states();
    std::size_t count = 1;
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (count > kMaxPaths / d) throw SizeGuardExceeded("joint_table: d^(N+1) exceeds the size guard");
        count *= d;
    }

    JointTable t;
    t.d_ = d;
    t.length_ = y.size();
    t.weights_.resize(count);
    std::vector<std::size_t> symbols(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        symbols[k] = y[k].symbol();
        if (symbols[k] >= model.channel.alphabet()) throw IndexOutOfRange("joint_table: symbol outside alphabet");
        t.phi_product_ *= model.channel.phi()[symbols[k]];
    }

    numeric::KahanSum total;
    std::vector<std::size_t> path;
    for (std::size_t code = 0; code < count; ++code) {
        t.decode(code, path);
        double w = prior[path[0]] * model.channel.g(path[0], symbols[0]) * model.channel.phi()[symbols[0]];
        for (std::size_t k = 1; k < path.size() && w != 0.0; ++k)
            w *= model.kernel(path[k - 1], path[k]) * model.channel.g(path[k], symbols[k]) *
                 model.channel.phi()[symbols[k]];
        t.weights_[code] = w;
        total.add(w);
    }
    t.total_ = total.value();
    return t;
}

Distribution conditional_law(const JointTable &table, const PathPredicate &condition, const StateQuery &query) {
    std::vector<numeric::KahanSum> mass(table.states());
    numeric::KahanSum total;
    std::vector<std::size_t> path;
    for (std::size_t code = 0; code < table.path_count(); ++code) {
        const double w = table.weight(code);
        if (w == 0.0) continue;
        table.decode(code, path);
        if (!condition(path)) continue;
        mass[query(path)].add(w);
        total.add(w);
    }
    if (!(total.value() > 0.0)) throw ZeroMassCondition("oracle: condition has zero mass");
    std::vector<double> out(table.states());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mass[i].value() / total.value();
    return Distribution(std::move(out));
}

double conditional_expectation(const JointTable &table, const PathPredicate &condition, const ValueQuery &query) {
    numeric::KahanSum num, total;
    std::vector<std::size_t> path;
    for (std::size_t code = 0; code < table.path_count(); ++code) {
        const double w = table.weight(code);
        if (w == 0.0) continue;
        table.decode(code, path);
        if (!condition(path)) continue;
        num.add(w * query(path));
        total.add(w);
    }
    if (!(total.value() > 0.0)) throw ZeroMassCondition("oracle: condition has zero mass");
    return num.value() / total.value();
}

Distribution marginal(const JointTable &table, std::size_t n) {
    return conditional_law(
        table, [](auto) { return true; }, [n](auto p) { return p[n]; });
}

Distribution transition(const JointTable &table, std::size_t n, std::size_t from) {
    return conditional_law(
        table, [n, from](auto p) { return p[n - 1] == from; }, [n](auto p) { return p[n]; });
}

Distribution pinned_initial(const JointTable &table, std::size_t n, std::size_t terminal) {
    return conditional_law(
        table, [n, terminal](auto p) { return p[n] == terminal; }, [](auto p) { return p[0]; });
}

TableSummary::TableSummary(const JointTable &table) : d_(table.states()) {
    const std::size_t len = table.length();
    std::vector<std::vector<numeric::KahanSum>> marginal(len, std::vector<numeric::KahanSum>(d_));
    std::vector<std::vector<numeric::KahanSum>> pair(len, std::vector<numeric::KahanSum>(d_ * d_));
    std::vector<std::vector<numeric::KahanSum>> ends(len, std::vector<numeric::KahanSum>(d_ * d_));
    numeric::KahanSum total;
    std::vector<std::size_t> path;
    for (std::size_t code = 0; code < table.path_count(); ++code) {
        const double w = table.weight(code);
        if (w == 0.0) continue;
        table.decode(code, path);
        total.add(w);
        for (std::size_t n = 0; n < len; ++n) {
            marginal[n][path[n]].add(w);
            ends[n][path[0] * d_ + path[n]].add(w);
            if (n > 0) pair[n][path[n - 1] * d_ + path[n]].add(w);
        }
    }
    total_ = total.value();
    auto flatten = [](const std::vector<std::vector<numeric::KahanSum>> &src) {
        std::vector<std::vector<double>> out(src.size());
        for (std::size_t i = 0; i < src.size(); ++i)
            for (const auto &k : src[i]) out[i].push_back(k.value());
        return out;
    };
    marginal_ = flatten(marginal);
    pair_ = flatten(pair);
    ends_ = flatten(ends);
}

Distribution TableSummary::marginal_law(std::size_t n) const {
    if (!(total_ > 0.0)) throw ZeroMassCondition("oracle: observation path has zero mass");
    std::vector<double> out(d_);
    for (std::size_t x = 0; x < d_; ++x) out[x] = marginal_.at(n)[x] / total_;
    return Distribution(std::move(out));
}

std::optional<Distribution> TableSummary::transition_law(std::size_t n, std::size_t from) const {
    if (n == 0) throw IndexOutOfRange("oracle: transition needs n >= 1");
    const auto &row = pair_.at(n);
    double mass = 0.0;
    for (std::size_t x = 0; x < d_; ++x) mass += row[from * d_ + x];
    if (!(mass > 0.0)) return std::nullopt;
    std::vector<double> out(d_);
    for (std::size_t x = 0; x < d_; ++x) out[x] = row[from * d_ + x] / mass;
    return Distribution(std::move(out));
}

std::optional<Distribution> TableSummary::pinned_law(std::size_t n, std::size_t terminal) const {
    const auto &tab = ends_.at(n);
    double mass = 0.0;
    for (std::size_t x0 = 0; x0 < d_; ++x0) mass += tab[x0 * d_ + terminal];
    if (!(mass > 0.0)) return std::nullopt;
    std::vector<double> out(d_);
    for (std::size_t x0 = 0; x0 < d_; ++x0) out[x0] = tab[x0 * d_ + terminal] / mass;
    return Distribution(std::move(out));
}

// -----------------------------------------------------------------------------

Distribution random_distribution(Rng &rng, std::size_t d) {
    std::vector<double> w(d);
    double total = 0.0;
    for (auto &v : w) {
        v = rng.exponential();
        total += v;
    }
    for (auto &v : w) v /= total;
    return Distribution(std::move(w));
}

namespace {

std::vector<double> simplex_row(Rng &rng, std::size_t n, double zero_probability) {
    std::vector<double> w(n);
    bool any = false;
    for (auto &v : w) {
        const bool zero = zero_probability > 0.0 && rng.uniform() < zero_probability;
        v = zero ? 0.0 : rng.exponential();
        any = any || v > 0.0;
    }
    if (!any) w[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))] = 1.0;
    double total = 0.0;
    for (double v : w) total += v;
    for (auto &v : w) v /= total;
    return w;
}

} // namespace

HmmModel random_model(Rng &rng, const RandomModelOptions &options) {
    const std::size_t d = options.states;
    const std::size_t m = options.alphabet;
    for (;;) {
        std::vector<std::vector<double>> kernel(d), g(d);
        for (std::size_t x = 0; x < d; ++x) kernel[x] = simplex_row(rng, d, options.zero_probability);
        for (std::size_t x = 0; x < d; ++x) g[x] = simplex_row(rng, m, options.zero_probability);
        try {
            return make_model(TransitionKernel(kernel), ObservationChannel::finite(std::move(g)), "random");
        } catch (const NonUniqueStationary &) {
            continue;
        } catch (const NoConvergence &) {
            continue;
        }
    }
}

} // namespace hmmlab::oracle
