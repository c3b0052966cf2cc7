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

#include "timesym/qmupl/wave_packet.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "timesym/error.hpp"

using namespace timesym::qmupl;
using timesym::stats::PrngStream;

namespace {

QmuplConfig small_config() {
    QmuplConfig c;
    c.g = 20.0;
    c.mass = 1.0;
    c.dt = 0.001;
    c.steps = 1000;
    c.x0 = 0.3;
    c.p0 = -1.5;
    return c;
}

} // namespace

TEST(StepForward, hand_computed) {
    QmuplConfig c;
    c.g = 4.0;
    c.mass = 4.0;
    c.dt = 0.5;
    const auto s = step_forward({1.0, 2.0}, 0.2, c);
    EXPECT_DOUBLE_EQ(s.x, 1.0 + 2.0 / 4.0 * 0.5 + 0.2 / 2.0);
    EXPECT_DOUBLE_EQ(s.p, 2.0 + 2.0 * 0.2);
    EXPECT_DOUBLE_EQ(collapse_centre(1.0, 0.2, 4.0, 0.5), 1.1);
    EXPECT_EQ(time_reverse_state({1.0, 2.0}), (WavePacketState{1.0, -2.0}));
}

TEST(QmuplConfig, validation) {
    auto c = small_config();
    EXPECT_NO_THROW(c.validate());
    c.steps = kMaxSteps + 1;
    EXPECT_THROW(c.validate(), timesym::DomainError);
    c = small_config();
    c.dt = 0.0;
    EXPECT_THROW(c.validate(), timesym::DomainError);
    c = small_config();
    EXPECT_THROW(simulate_with_increments(c, std::vector<double>(3)), timesym::DimensionError);
}

TEST(SimulateForward, seeded_and_shaped) {
    const auto c = small_config();
    PrngStream a(9);
    PrngStream b(9);
    const auto ta = simulate_forward(c, a);
    const auto tb = simulate_forward(c, b);
    EXPECT_EQ(ta.x, tb.x);
    EXPECT_EQ(ta.x.size(), 1001u);
    EXPECT_EQ(ta.z.size(), 1000u);
    EXPECT_EQ(ta.x.front(), 0.3);
    EXPECT_EQ(ta.p.front(), -1.5);
}

TEST(SimulateForward, increments_pass_normality) {
    PrngStream rng(10);
    const auto t = simulate_forward(small_config(), rng);
    EXPECT_GT(normality_test(t.dB, 0.001).p_value, 0.001);
}

TEST(ReverseTrajectory, anchored_at_final_point) {
    PrngStream rng(11);
    const auto c = small_config();
    const auto fwd = simulate_forward(c, rng);
    const auto rev = reverse_trajectory(fwd, c);
    EXPECT_EQ(rev.x_prime.back(), fwd.x.back());
    EXPECT_EQ(rev.p_prime.back(), -fwd.p.back());
    EXPECT_EQ(rev.dB_prime.size(), fwd.dB.size());
    EXPECT_THROW(reverse_trajectory(std::vector<double>{}, 0.0, 0.0, c),
                 timesym::InsufficientDataError);
}

TEST(ReverseTrajectory, increments_have_forward_scale) {
    PrngStream rng(12);
    auto c = small_config();
    c.steps = 20000;
    const auto fwd = simulate_forward(c, rng);
    const auto rev = reverse_trajectory(fwd, c);
    double s2 = 0.0;
    for (double d : rev.dB_prime) {
        s2 += d * d;
    }
    EXPECT_NEAR(s2 / rev.dB_prime.size() / c.dt, 1.0, 0.2);
}

TEST(ReconstructForward, centres_reproduce_the_trajectory) {
    PrngStream rng(13);
    const auto c = small_config();
    const auto fwd = simulate_forward(c, rng);
    const auto again = reconstruct_forward(fwd.z, c.x0, c.p0, c);
    ASSERT_EQ(again.x.size(), fwd.x.size());
    for (std::size_t i = 0; i < fwd.x.size(); ++i) {
        EXPECT_NEAR(again.x[i], fwd.x[i], 1e-12 * (1.0 + std::abs(fwd.x[i])));
        EXPECT_NEAR(again.p[i], fwd.p[i], 1e-12 * (1.0 + std::abs(fwd.p[i])));
    }
    for (std::size_t i = 0; i < fwd.dB.size(); ++i) {
        EXPECT_NEAR(again.dB[i], fwd.dB[i], 1e-12);
        EXPECT_NEAR(again.z[i], fwd.z[i], 1e-12 * (1.0 + std::abs(fwd.z[i])));
    }
}

TEST(IncrementCorrelation, forward_naive_and_reconstructed) {
    PrngStream rng(14);
    const auto c = small_config();
    const auto fwd = simulate_forward(c, rng);
    EXPECT_GT(increment_correlation(fwd.x, fwd.p, c.mass, c.dt), 0.99);
    const auto naive = naive_time_reverse(fwd);
    EXPECT_LT(increment_correlation(naive.x, naive.p, c.mass, c.dt), -0.99);
    const auto back = backward_reading(reverse_trajectory(fwd, c));
    EXPECT_GT(increment_correlation(back.x, back.p, c.mass, c.dt), 0.99);
}

TEST(IncrementCorrelation, degenerate_series) {
    std::vector<double> x{0.0, 0.0, 0.0};
    std::vector<double> p{0.0, 0.0, 0.0};
    EXPECT_THROW(increment_correlation(x, p, 1.0, 0.1), timesym::DegenerateTestError);
    EXPECT_THROW(increment_correlation(x, std::vector<double>{0.0}, 1.0, 0.1),
                 timesym::DimensionError);
}

TEST(NaiveTimeReverse, flips_order_and_momentum) {
    WavePacketTrajectory t;
    t.x = {1, 2, 3};
    t.p = {4, 5, 6};
    const auto r = naive_time_reverse(t);
    EXPECT_EQ(r.x, (std::vector<double>{3, 2, 1}));
    EXPECT_EQ(r.p, (std::vector<double>{-6, -5, -4}));
}

TEST(EnsembleEnergyCurve, grows_linearly) {
    QmuplConfig c;
    const PrngStream rng(15);
    const auto curve = ensemble_energy_curve(c, 1000, rng);
    ASSERT_EQ(curve.size(), 1001u);
    EXPECT_EQ(curve[0].mean_p2, 0.0);
    EXPECT_NEAR(curve.back().t, 1.0, 1e-12);
    EXPECT_NEAR(curve.back().mean_p2, 100.0, 4.0 * curve.back().standard_error);
    EXPECT_NEAR(curve[500].mean_p2, 50.0, 4.0 * curve[500].standard_error);
    const auto again = ensemble_energy_curve(c, 1000, rng);
    EXPECT_EQ(again.back().mean_p2, curve.back().mean_p2);
}
