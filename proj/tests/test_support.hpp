// Shared assertions for the unit tests.
#pragma once

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "hmmlab/distribution.hpp"

namespace hmmlab::testing {

inline ::testing::AssertionResult near(const Distribution &actual, const Distribution &expected, double tol) {
    if (actual.size() != expected.size())
        return ::testing::AssertionFailure() << "size " << actual.size() << " vs " << expected.size();
    for (std::size_t i = 0; i < actual.size(); ++i)
        if (!(std::abs(actual[i] - expected[i]) <= tol))
            return ::testing::AssertionFailure()
                   << "entry " << i << ": " << actual[i] << " vs " << expected[i] << " (tol " << tol << ")";
    return ::testing::AssertionSuccess();
}

inline double max_abs_diff(const Distribution &a, const Distribution &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace hmmlab::testing
