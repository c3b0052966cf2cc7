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

#include "timesym/lattice/evolution.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "timesym/error.hpp"

using namespace timesym::lattice;
using timesym::stats::PrngStream;

namespace {

LatticeConfig make_config(int n, double x, double theta, int steps) {
    LatticeConfig c;
    c.half_columns = n;
    c.collapse_x = x;
    c.theta = theta;
    c.steps = steps;
    return c;
}

} // namespace

TEST(VerticesAtStep, brick_pattern) {
    const auto even = vertices_at_step(6, 0);
    ASSERT_EQ(even.size(), 3u);
    EXPECT_EQ(even[0].left, 0);
    EXPECT_EQ(even[0].right, 1);
    EXPECT_EQ(even[2].left, 4);
    EXPECT_EQ(even[2].right, 5);
    const auto odd = vertices_at_step(6, 3);
    EXPECT_EQ(odd[0].left, 1);
    EXPECT_EQ(odd[0].right, 2);
    EXPECT_EQ(odd[2].left, 5);
    EXPECT_EQ(odd[2].right, 0);
}

TEST(VerticesAtStep, every_column_exactly_once) {
    for (int t = 0; t < 4; ++t) {
        std::vector<int> hits(8, 0);
        for (const auto &v : vertices_at_step(8, t)) {
            ++hits[v.left];
            ++hits[v.right];
        }
        for (int h : hits) {
            EXPECT_EQ(h, 1);
        }
    }
}

TEST(RunForward, same_seed_same_record) {
    const auto config = make_config(4, 0.5, 0.9, 30);
    const auto init = build_basis_state(OccupancyPattern::single_particle(8, 3));
    PrngStream a(77);
    PrngStream b(77);
    const auto ra = run_forward(config, init, a);
    const auto rb = run_forward(config, init, b);
    EXPECT_EQ(ra.record.field, rb.record.field);
    EXPECT_EQ(ra.record.probabilities, rb.record.probabilities);
    PrngStream c(78);
    EXPECT_FALSE(run_forward(config, init, c).record.field == ra.record.field);
}

TEST(RunForward, vacuum_noise_is_bernoulli) {
    const double x = 0.5;
    const auto config = make_config(4, x, std::numbers::pi / 4, 500);
    PrngStream rng(5);
    const auto run = run_forward(config, build_basis_state(OccupancyPattern::vacuum(8)), rng);
    double ones = 0.0;
    for (auto a : run.record.field.flat()) {
        ones += a;
    }
    for (auto p : run.record.probabilities.flat()) {
        EXPECT_NEAR(p, 0.2, 1e-15);
    }
    const double n = static_cast<double>(run.record.field.size());
    const double se = std::sqrt(0.2 * 0.8 / n);
    EXPECT_NEAR(ones / n, 0.2, 4 * se);
    EXPECT_NEAR(run.state[0].real(), 1.0, 1e-12);
}

TEST(RunForward, stationary_particle_under_strong_collapse) {
    // theta = pi/2 never hops; X = 0 projects, so the field is the occupation.
    const auto config = make_config(3, 0.0, std::numbers::pi / 2, 20);
    PrngStream rng(6);
    const auto run = run_forward(config, build_basis_state(OccupancyPattern::single_particle(6, 2)), rng);
    for (int t = 0; t < 20; ++t) {
        for (int i = 0; i < 6; ++i) {
            EXPECT_EQ(run.record.field(t, i), i == 2 ? 1 : 0);
            EXPECT_NEAR(run.record.probabilities(t, i), i == 2 ? 1.0 : 0.0, 1e-15);
        }
    }
}

TEST(RunForward, first_link_matches_born_frequency) {
    // Column 0 of step 0 is sampled right after one vertex unitary.
    const auto config = make_config(2, 0.3, 0.4, 1);
    PrngStream rng_state(9);
    const auto init = timesym::testing::random_sector_state(4, 1, rng_state);
    auto after_vertex = apply_vertex(init, 0, config.theta);
    const double p = link_collapse_probability(after_vertex, 0, config.collapse_x);
    const int runs = 20000;
    double ones = 0.0;
    for (int r = 0; r < runs; ++r) {
        PrngStream rng(1000 + r);
        ones += run_forward(config, init, rng).record.field(0, 0);
    }
    EXPECT_NEAR(ones / runs, p, 4 * std::sqrt(p * (1 - p) / runs));
}

TEST(RunForward, rejects_mismatched_state) {
    const auto config = make_config(2, 0.5, 0.3, 5);
    PrngStream rng(1);
    EXPECT_THROW(run_forward(config, build_basis_state(OccupancyPattern::vacuum(6)), rng),
                 timesym::DimensionError);
    auto bad = config;
    bad.collapse_x = 1.2;
    EXPECT_THROW(run_forward(bad, build_basis_state(OccupancyPattern::vacuum(4)), rng),
                 timesym::DomainError);
}

TEST(RunForwardWithField, impossible_field_is_invalid) {
    const auto config = make_config(1, 0.0, std::numbers::pi / 2, 1);
    StochasticField field(1, 2, 0);
    field(0, 0) = 1; // the vacuum can never give alpha = 1 at X = 0
    EXPECT_THROW(run_forward_with_field(config, build_basis_state(OccupancyPattern::vacuum(2)), field),
                 timesym::InvalidStateError);
    EXPECT_THROW(run_forward_with_field(config, build_basis_state(OccupancyPattern::vacuum(2)),
                                        StochasticField(2, 2)),
                 timesym::DimensionError);
}

TEST(RunBackward, field_is_read_not_resampled) {
    const auto config = make_config(3, 0.6, 0.8, 15);
    PrngStream rng(10);
    const auto fwd = run_forward(config, build_basis_state(OccupancyPattern::single_particle(6, 1)), rng);
    const auto copy = fwd.record.field;
    const auto back = run_backward_from(config, fwd);
    EXPECT_EQ(back.record.field, copy);
    EXPECT_EQ(fwd.record.field, copy);
    EXPECT_EQ(back.record.direction, Direction::backward);
}

TEST(RunBackward, x_one_recovers_initial_state) {
    const auto config = make_config(3, 1.0, 0.7, 25);
    PrngStream rng(11);
    const auto init = timesym::testing::random_state(6, rng);
    auto normalized = init;
    normalized.normalize();
    const auto fwd = run_forward(config, init, rng);
    const auto back = run_backward_from(config, fwd);
    for (std::size_t k = 0; k < normalized.dimension(); ++k) {
        EXPECT_NEAR(std::abs(back.state[k] - std::conj(normalized[k])), 0.0, 1e-10);
    }
    for (int i = 0; i < 6; ++i) {
        EXPECT_NEAR(occupancy_expectation(back.state, i), occupancy_expectation(normalized, i), 1e-10);
    }
}

TEST(RunBackward, strong_collapse_is_deterministic) {
    const auto config = make_config(3, 0.0, std::numbers::pi / 2, 10);
    PrngStream rng(12);
    const auto fwd = run_forward(config, build_basis_state(OccupancyPattern::single_particle(6, 4)), rng);
    const auto back = run_backward_from(config, fwd);
    for (int t = 0; t < 10; ++t) {
        for (int i = 0; i < 6; ++i) {
            EXPECT_NEAR(back.record.probabilities(t, i), static_cast<double>(fwd.record.field(t, i)), 1e-15);
        }
    }
}

TEST(RunBackward, probabilities_are_in_unit_interval) {
    const auto config = make_config(4, 0.4, 0.5, 40);
    PrngStream rng(13);
    const auto fwd = run_forward(config, build_basis_state(OccupancyPattern::single_particle(8, 5)), rng);
    const auto back = run_backward_from(config, fwd);
    for (auto p : back.record.probabilities.flat()) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
    EXPECT_GT(sequential_probability(back.record), 0.0);
}

TEST(SequentialProbability, vacuum_closed_form) {
    const double x = 0.5;
    const auto config = make_config(1, x, 0.3, 2);
    StochasticField field(2, 2, 0);
    field(1, 1) = 1;
    const auto run = run_forward_with_field(config, build_basis_state(OccupancyPattern::vacuum(2)), field);
    const double q = x * x / (1 + x * x);
    EXPECT_NEAR(sequential_probability(run.record), q * std::pow(1 - q, 3), 1e-15);
}
