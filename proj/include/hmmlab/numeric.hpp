// Small summation helpers shared across modules.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace hmmlab::numeric {

/**
 * @brief Sum of a set of terms that does not depend on their order.
 *
 * Terms are sorted before accumulation, so any permutation of the input gives
 * a bit-identical result. State relabelings therefore leave filter outputs
 * unchanged exactly, not just up to rounding.
 */
inline double ordered_sum(std::span<const double> terms) {
    constexpr std::size_t kInline = 16;
    if (terms.size() <= kInline) {
        std::array<double, kInline> buf{};
        std::copy(terms.begin(), terms.end(), buf.begin());
        std::sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(terms.size()));
        double s = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) s += buf[i];
        return s;
    }
    std::vector<double> buf(terms.begin(), terms.end());
    std::sort(buf.begin(), buf.end());
    double s = 0.0;
    for (double v : buf) s += v;
    return s;
}

/// Kahan-compensated running sum.
class KahanSum {
public:
    void add(double v) {
        const double y = v - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

} // namespace hmmlab::numeric
