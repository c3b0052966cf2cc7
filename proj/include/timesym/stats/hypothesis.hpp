// Copyright 2026 The timesym Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "timesym/error.hpp"
#include "timesym/stats/distributions.hpp"

namespace timesym::stats {

/// Outcome of a hypothesis test.  `parameter` is the degrees of freedom for
/// chi-squared tests and the sample size for Kolmogorov-Smirnov tests.
struct TestReport {
    double statistic = 0.0;
    std::size_t parameter = 0;
    double p_value = 1.0;
    std::string method;
};

inline constexpr std::size_t kMinKsSample = 10;

/**
 * One-sample Kolmogorov-Smirnov distance sup |F_n(x) - F(x)|, evaluated at
 * the order statistics with both one-sided gaps (i+1)/n - F and F - i/n.
 */
template <class Cdf>
double ks_statistic(std::span<const double> sample, Cdf &&cdf) {
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double distance = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double k = static_cast<double>(i);
        distance = std::max({distance, (k + 1.0) / n - f, f - k / n});
    }
    return distance;
}

/// KS test with the asymptotic p-value Q_KS(sqrt(n) D).  The asymptotic
/// law overstates p-values slightly for n < 50.
template <class Cdf>
TestReport ks_test(std::span<const double> sample, Cdf &&cdf) {
    if (sample.size() < kMinKsSample) {
        throw InsufficientDataError("ks_test: need at least " + std::to_string(kMinKsSample) +
                                    " samples, got " + std::to_string(sample.size()));
    }
    const double d = ks_statistic(sample, cdf);
    const double n = static_cast<double>(sample.size());
    return {d, sample.size(), kolmogorov_sf(std::sqrt(n) * d), "kolmogorov-smirnov"};
}

inline double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

/// Equal-width histogram of values in [0, 1]; 1.0 falls in the last bin.
inline std::vector<std::size_t> unit_histogram(std::span<const double> values,
                                               std::size_t bin_count) {
    if (bin_count == 0) {
        throw DomainError("unit_histogram: bin_count must be positive");
    }
    std::vector<std::size_t> counts(bin_count, 0);
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError("unit_histogram: value outside [0, 1]");
        }
        auto bin = static_cast<std::size_t>(v * static_cast<double>(bin_count));
        counts[std::min(bin, bin_count - 1)] += 1;
    }
    return counts;
}

/// Pearson goodness-of-fit of [0,1] values against Uniform[0,1] with
/// `bin_count` equal-width bins (bin_count - 1 degrees of freedom).
inline TestReport chi_squared_uniformity(std::span<const double> values, std::size_t bin_count) {
    if (values.empty()) {
        throw InsufficientDataError("chi_squared_uniformity: empty input");
    }
    if (bin_count < 2) {
        throw DomainError("chi_squared_uniformity: need at least two bins");
    }
    const auto counts = unit_histogram(values, bin_count);
    const double expected = static_cast<double>(values.size()) / static_cast<double>(bin_count);
    double statistic = 0.0;
    for (auto c : counts) {
        const double diff = static_cast<double>(c) - expected;
        statistic += diff * diff / expected;
    }
    const auto dof = bin_count - 1;
    return {statistic, dof, chi_squared_sf(statistic, static_cast<long>(dof)),
            "chi-squared-uniformity"};
}

} // namespace timesym::stats
