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
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "timesym/error.hpp"
#include "timesym/retrodiction/markov.hpp"
#include "timesym/stats/prng.hpp"

namespace timesym::retrodiction {

enum class Selection { pre, post };

struct MomentumWalkConfig {
    int grid_half_width = 60;   ///< momentum levels -H .. H
    double step_variance = 0.5; ///< variance of one step, in (grid units)^2; at most 1
    int steps = 100;
    std::size_t runs = 20000;
    Selection selection = Selection::pre;
    int post_tolerance = 1; ///< post-selection keeps |p_final| <= this

    /// Smallest half-width meeting the truncation rule H >= 6 sqrt(T v).
    static int minimum_half_width(int steps, double step_variance) {
        return std::max(1, static_cast<int>(std::ceil(6.0 * std::sqrt(steps * step_variance))));
    }

    void validate() const {
        if (steps < 1 || runs < 1 || grid_half_width < 1) {
            throw DomainError("momentum walk: steps, runs and grid half-width must be positive");
        }
        if (!(step_variance >= 0.0 && step_variance <= 1.0)) {
            throw DomainError("momentum walk: step variance must lie in [0, 1]");
        }
        if (grid_half_width < minimum_half_width(steps, step_variance)) {
            throw PreconditionError("momentum walk: grid half-width " +
                                    std::to_string(grid_half_width) + " is below 6 sqrt(T v) = " +
                                    std::to_string(minimum_half_width(steps, step_variance)));
        }
        if (post_tolerance < 0) {
            throw DomainError("momentum walk: post-selection tolerance must be non-negative");
        }
    }
};

/**
 * Nearest-neighbour momentum walk on levels -H .. H: up and down one level
 * with probability v / 2 each, otherwise stay.  A step that would leave
 * the grid is replaced by staying put (reflecting boundary).  State k of
 * the chain is momentum k - H.
 */
inline MarkovModel momentum_walk_kernel(int half_width, double step_variance) {
    if (half_width < 1 || !(step_variance >= 0.0 && step_variance <= 1.0)) {
        throw DomainError("momentum_walk_kernel: invalid parameters");
    }
    const int n = 2 * half_width + 1;
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
    const double move = 0.5 * step_variance;
    for (int i = 0; i < n; ++i) {
        double stay = 1.0 - step_variance;
        if (i > 0) {
            r(i - 1, i) = move;
        } else {
            stay += move;
        }
        if (i < n - 1) {
            r(i + 1, i) = move;
        } else {
            stay += move;
        }
        r(i, i) = stay;
    }
    std::vector<std::string> labels;
    for (int k = -half_width; k <= half_width; ++k) {
        labels.push_back("p" + std::to_string(k));
    }
    return MarkovModel(std::move(labels), std::move(r));
}

struct EnergyRow {
    int t = 0;
    double forward_reading = 0.0;  ///< mean p^2 / 2 at time t
    double reverse_reading = 0.0;  ///< the same series read backward, at T - t
    double standard_error = 0.0;   ///< of forward_reading
    std::size_t survivors = 0;
};

struct MomentumWalkResult {
    std::vector<EnergyRow> rows;
    std::size_t survivors = 0;
    std::size_t attempted = 0;
};

/**
 * Simulates `runs` walkers.  Pre-selection starts every walker at p = 0.
 * Post-selection starts walkers uniformly over the grid and keeps only those
 * ending within `post_tolerance` of p = 0.  Walker r uses `rng.split(r)`.
 */
inline MomentumWalkResult momentum_walk_demo(const MomentumWalkConfig &config,
                                             const stats::PrngStream &rng) {
    config.validate();
    const int h = config.grid_half_width;
    const auto t_count = static_cast<std::size_t>(config.steps) + 1;
    std::vector<double> sum(t_count, 0.0);
    std::vector<double> sum_sq(t_count, 0.0);
    std::vector<int> path(t_count);
    std::size_t survivors = 0;
    const double move = 0.5 * config.step_variance;
    for (std::size_t r = 0; r < config.runs; ++r) {
        auto stream = rng.split(r);
        int p = 0;
        if (config.selection == Selection::post) {
            const auto levels = static_cast<std::uint64_t>(2 * h + 1);
            p = static_cast<int>(stream.next_u64() % levels) - h;
        }
        path[0] = p;
        for (std::size_t t = 1; t < t_count; ++t) {
            const double u = stream.uniform();
            if (u < move) {
                p = p > -h ? p - 1 : p;
            } else if (u < 2.0 * move) {
                p = p < h ? p + 1 : p;
            }
            path[t] = p;
        }
        if (config.selection == Selection::post && std::abs(p) > config.post_tolerance) {
            continue;
        }
        ++survivors;
        for (std::size_t t = 0; t < t_count; ++t) {
            const double e = 0.5 * path[t] * path[t];
            sum[t] += e;
            sum_sq[t] += e * e;
        }
    }
    if (survivors == 0) {
        throw ResampleExhaustedError("momentum walk: post-selection kept no trajectories out of " +
                                         std::to_string(config.runs),
                                     0);
    }
    MomentumWalkResult result;
    result.survivors = survivors;
    result.attempted = config.runs;
    const double count = static_cast<double>(survivors);
    std::vector<double> mean(t_count);
    std::vector<double> se(t_count);
    for (std::size_t t = 0; t < t_count; ++t) {
        mean[t] = sum[t] / count;
        const double var =
            survivors > 1 ? std::max(0.0, (sum_sq[t] - count * mean[t] * mean[t]) / (count - 1.0))
                          : 0.0;
        se[t] = std::sqrt(var / count);
    }
    for (std::size_t t = 0; t < t_count; ++t) {
        result.rows.push_back({static_cast<int>(t), mean[t], mean[t_count - 1 - t], se[t], survivors});
    }
    return result;
}

} // namespace timesym::retrodiction
