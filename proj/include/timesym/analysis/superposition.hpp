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
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "timesym/error.hpp"
#include "timesym/stats/prng.hpp"

namespace timesym::analysis {

struct SuperpositionPoint {
    std::size_t links = 0;       ///< M = 2 n m discriminating links crossed so far
    std::int64_t imbalance = 0;  ///< M_A - M_B
    double log_ratio = 0.0;      ///< |ln(|amp_A| / |amp_B|)| = |M_A - M_B| * (-ln X)
};

/**
 * Collapse of |A> + |B>, two disjoint blocks of n occupied qubits, with the
 * vertex unitary switched off (theta = pi/2).  Only the two-component
 * bookkeeping is simulated: after m steps the state is
 * X^{M_B}|A> + X^{M_A}|B>.  Each step crosses 2n discriminating links (n
 * where only A is occupied, n where only B is); alpha is drawn with the
 * two-component Born probability and the matching count is incremented.
 *
 * One point is recorded every `record_every` steps.
 */
inline std::vector<SuperpositionPoint>
superposition_lifetime_experiment(std::size_t block_size, double epsilon, std::size_t max_steps,
                                  stats::PrngStream &rng, std::size_t record_every = 1) {
    if (block_size == 0) {
        throw DomainError("superposition_lifetime_experiment: block size must be positive");
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw DomainError("superposition_lifetime_experiment: epsilon must lie in [0, 1]");
    }
    if (record_every == 0) {
        throw DomainError("superposition_lifetime_experiment: record_every must be positive");
    }
    const double x = 1.0 - epsilon;
    const double x2 = x * x;
    const double log_x = std::log(x); // -inf when X = 0
    std::int64_t imbalance = 0;

    // Weight of |A> in the normalized state, |a|^2 / (|a|^2 + |b|^2) with
    // |b|^2 / |a|^2 = X^{2 (M_A - M_B)}.
    auto weight_a = [&]() {
        if (imbalance == 0) {
            return 0.5;
        }
        if (x == 0.0) {
            return imbalance > 0 ? 1.0 : 0.0;
        }
        return 1.0 / (1.0 + std::exp(2.0 * static_cast<double>(imbalance) * log_x));
    };

    std::vector<SuperpositionPoint> series;
    series.reserve(max_steps / record_every + 1);
    std::size_t links = 0;
    for (std::size_t step = 1; step <= max_steps; ++step) {
        for (std::size_t k = 0; k < block_size; ++k) {
            // Link occupied in A only: alpha = 1 agrees with A.
            double w = weight_a();
            bool agrees_a = rng.uniform() < (w + (1.0 - w) * x2) / (1.0 + x2);
            imbalance += agrees_a ? 1 : -1;
            // Link occupied in B only: alpha = 1 agrees with B.
            w = weight_a();
            const bool agrees_b = rng.uniform() < (w * x2 + (1.0 - w)) / (1.0 + x2);
            imbalance += agrees_b ? -1 : 1;
        }
        links += 2 * block_size;
        if (step % record_every == 0) {
            const double magnitude = static_cast<double>(std::llabs(imbalance));
            series.push_back({links, imbalance, magnitude == 0.0 ? 0.0 : -magnitude * log_x});
        }
    }
    return series;
}

} // namespace timesym::analysis
