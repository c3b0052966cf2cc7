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

#include <cmath>
#include <cstddef>
#include <limits>

#include "timesym/error.hpp"
#include "timesym/lattice/evolution.hpp"

namespace timesym::analysis {

/// Binomial mean and variance of the region-averaged vacuum field.
struct NoiseStats {
    double mu = 0.0;
    double sigma_squared = 0.0;
};

/// mu = X^2 / (1 + X^2),  sigma^2 = X^2 / (M (1 + X^2)^2).
inline NoiseStats vacuum_noise_stats(double x, std::size_t links) {
    lattice::check_collapse_parameter(x);
    if (links == 0) {
        throw DomainError("vacuum_noise_stats: region must contain at least one link");
    }
    const double x2 = x * x;
    const double denom = 1.0 + x2;
    return {x2 / denom, x2 / (static_cast<double>(links) * denom * denom)};
}

inline constexpr double kDefaultDetectabilityConstant = 25.0;

/**
 * Minimum region size ceil(C / epsilon^2), epsilon = 1 - X, for an excited
 * region to stand out against vacuum noise.  C = 25 puts a maximally
 * excited region at least 5 sigma from the vacuum mean.
 */
inline std::size_t detectability_threshold(double epsilon,
                                           double constant = kDefaultDetectabilityConstant) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw DomainError("detectability_threshold: epsilon must lie in (0, 1]");
    }
    if (!(constant > 0.0)) {
        throw DomainError("detectability_threshold: constant must be positive");
    }
    const double raw = constant / (epsilon * epsilon);
    // Absorb the rounding in epsilon^2 so that e.g. 25 / 0.1^2 gives 2500.
    return static_cast<std::size_t>(std::ceil(raw * (1.0 - 1e-12)));
}

/// Half-open block of links [t_begin, t_end) x [column_begin, column_end).
struct LinkRegion {
    int t_begin = 0;
    int t_end = 0;
    int column_begin = 0;
    int column_end = 0;

    std::size_t size() const noexcept {
        if (t_end <= t_begin || column_end <= column_begin) {
            return 0;
        }
        return static_cast<std::size_t>(t_end - t_begin) *
               static_cast<std::size_t>(column_end - column_begin);
    }
};

struct CoarseGrain {
    double mean_alpha = 0.0;
    double z_score = 0.0;
};

/// Averages alpha over `region` and scores it against the vacuum noise of a
/// region of the same size.  With X = 0 the vacuum is noiseless and a
/// nonzero deviation scores +-infinity.
inline CoarseGrain coarse_grain_field(const lattice::StochasticField &field,
                                      const LinkRegion &region, double x) {
    const auto links = region.size();
    if (links == 0) {
        throw DomainError("coarse_grain_field: empty region");
    }
    if (region.t_begin < 0 || region.column_begin < 0 || region.t_end > field.steps() ||
        region.column_end > field.columns()) {
        throw DimensionError("coarse_grain_field: region exceeds field bounds");
    }
    std::size_t ones = 0;
    for (int t = region.t_begin; t < region.t_end; ++t) {
        for (int i = region.column_begin; i < region.column_end; ++i) {
            ones += field(t, i);
        }
    }
    const double mean = static_cast<double>(ones) / static_cast<double>(links);
    const auto noise = vacuum_noise_stats(x, links);
    const double deviation = mean - noise.mu;
    double z;
    if (noise.sigma_squared > 0.0) {
        z = deviation / std::sqrt(noise.sigma_squared);
    } else if (deviation == 0.0) {
        z = 0.0;
    } else {
        z = std::copysign(std::numeric_limits<double>::infinity(), deviation);
    }
    return {mean, z};
}

} // namespace timesym::analysis
