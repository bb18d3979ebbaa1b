#include "hmmlab/distribution.hpp"

#include <cmath>
#include <sstream>

#include "hmmlab/errors.hpp"
#include "hmmlab/numeric.hpp"

namespace hmmlab {

Distribution Distribution::checked(std::vector<double> weights) {
    Distribution d(std::move(weights));
    const auto issues = d.validate();
    if (!issues.empty()) throw ModelError("invalid distribution: " + issues.front());
    return d;
}

Distribution Distribution::uniform(std::size_t d) {
    return Distribution(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

Distribution Distribution::point_mass(std::size_t d, std::size_t state) {
    if (state >= d) throw IndexOutOfRange("point mass state out of range");
    std::vector<double> w(d, 0.0);
    w[state] = 1.0;
    return Distribution(std::move(w));
}

std::vector<std::string> Distribution::validate() const {
    std::vector<std::string> issues;
    if (w_.empty()) {
        issues.emplace_back("distribution is empty");
        return issues;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (!std::isfinite(w_[i]) || w_[i] < 0.0) {
            std::ostringstream os;
            os << "weight " << i << " is negative or not finite (" << w_[i] << ")";
            issues.push_back(os.str());
        }
        total += w_[i];
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "weights sum to " << total << ", not 1";
        issues.push_back(os.str());
    }
    return issues;
}

double tv_distance(const Distribution &a, const Distribution &b) {
    if (a.size() != b.size()) throw DimensionMismatch("tv_distance: dimension mismatch");
    std::vector<double> diffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = std::abs(a[i] - b[i]);
    return numeric::ordered_sum(diffs);
}

std::vector<bool> support(const Distribution &a) {
    std::vector<bool> s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] > 0.0;
    return s;
}

TransitionKernel::TransitionKernel(const std::vector<std::vector<double>> &rows)
    : d_(rows.size()), p_(rows.size() * rows.size()) {
    for (std::size_t i = 0; i < d_; ++i) {
        if (rows[i].size() != d_) throw DimensionMismatch("transition kernel must be square");
        for (std::size_t j = 0; j < d_; ++j) p_[i * d_ + j] = rows[i][j];
    }
}

TransitionKernel::TransitionKernel(std::initializer_list<std::initializer_list<double>> rows)
    : TransitionKernel(std::vector<std::vector<double>>(rows.begin(), rows.end())) {}

TransitionKernel TransitionKernel::identity(std::size_t d) {
    TransitionKernel k(d);
    for (std::size_t i = 0; i < d; ++i) k(i, i) = 1.0;
    return k;
}

TransitionKernel TransitionKernel::cycle(std::size_t d) {
    TransitionKernel k(d);
    for (std::size_t i = 0; i < d; ++i) k(i, (i + 1) % d) = 1.0;
    return k;
}

Distribution TransitionKernel::row_distribution(std::size_t from) const {
    const auto r = row(from);
    return Distribution(std::vector<double>(r.begin(), r.end()));
}

std::vector<std::vector<double>> TransitionKernel::to_rows() const {
    std::vector<std::vector<double>> rows(d_);
    for (std::size_t i = 0; i < d_; ++i) {
        const auto r = row(i);
        rows[i].assign(r.begin(), r.end());
    }
    return rows;
}

std::vector<std::string> TransitionKernel::validate() const {
    std::vector<std::string> issues;
    if (d_ == 0) issues.emplace_back("kernel has no states");
    for (std::size_t i = 0; i < d_; ++i) {
        for (const auto &msg : row_distribution(i).validate())
            issues.push_back("kernel row " + std::to_string(i) + ": " + msg);
    }
    return issues;
}

Distribution propagate(const Distribution &a, const TransitionKernel &p) {
    const std::size_t d = p.dim();
    if (a.size() != d) throw DimensionMismatch("propagate: dimension mismatch");
    std::vector<double> out(d);
    std::vector<double> terms(d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) terms[i] = a[i] * p(i, j);
        out[j] = numeric::ordered_sum(terms);
    }
    return Distribution(std::move(out));
}

TransitionKernel compose(const TransitionKernel &a, const TransitionKernel &b) {
    const std::size_t d = a.dim();
    if (b.dim() != d) throw DimensionMismatch("compose: dimension mismatch");
    TransitionKernel out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < d; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

} // namespace hmmlab
