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
#include <cstdint>
#include <span>
#include <vector>

#include "timesym/error.hpp"
#include "timesym/stats/distributions.hpp"
#include "timesym/stats/hypothesis.hpp"
#include "timesym/stats/prng.hpp"

namespace timesym::qmupl {

/// Centre of a stably localized wave packet in phase space.
struct WavePacketState {
    double x = 0.0;
    double p = 0.0;

    friend bool operator==(const WavePacketState &, const WavePacketState &) = default;
};

inline constexpr int kMaxSteps = 100000;

struct QmuplConfig {
    double g = 20.0;
    double mass = 1.0;
    double dt = 0.001;
    int steps = 1000;
    double x0 = 0.0;
    double p0 = 0.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (!(g > 0.0) || !(mass > 0.0) || !(dt > 0.0)) {
            throw DomainError("qmupl: g, mass and dt must be positive");
        }
        if (steps < 1 || steps > kMaxSteps) {
            throw DomainError("qmupl: steps must lie in [1, 100000]");
        }
        if (!std::isfinite(x0) || !std::isfinite(p0)) {
            throw DomainError("qmupl: initial point must be finite");
        }
    }
};

/// Forward series: x, p have steps + 1 entries; z, dB have steps entries.
struct WavePacketTrajectory {
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> z;
    std::vector<double> dB;

    std::size_t steps() const noexcept { return dB.size(); }
};

/// Backward series indexed like the forward one; index n is the anchor.
struct ReversedTrajectory {
    std::vector<double> x_prime;
    std::vector<double> p_prime;
    std::vector<double> dB_prime;
};

/// x <- x + (p / m) dt + dB / sqrt(m),  p <- p + (g / 2) dB.
inline WavePacketState step_forward(const WavePacketState &s, double dB, const QmuplConfig &c) {
    return {s.x + s.p / c.mass * c.dt + dB / std::sqrt(c.mass), s.p + 0.5 * c.g * dB};
}

/// z = x + dB / (g dt).
inline double collapse_centre(double x, double dB, double g, double dt) {
    if (!(g > 0.0) || !(dt > 0.0)) {
        throw DomainError("collapse_centre: g and dt must be positive");
    }
    return x + dB / (g * dt);
}

inline WavePacketState time_reverse_state(const WavePacketState &s) { return {s.x, -s.p}; }

/// Forward trajectory driven by prescribed Brownian increments.
inline WavePacketTrajectory simulate_with_increments(const QmuplConfig &config,
                                                     std::span<const double> increments) {
    config.validate();
    if (increments.size() != static_cast<std::size_t>(config.steps)) {
        throw DimensionError("simulate_with_increments: need one increment per step");
    }
    WavePacketTrajectory traj;
    const auto n = increments.size();
    traj.x.reserve(n + 1);
    traj.p.reserve(n + 1);
    traj.z.reserve(n);
    traj.dB.assign(increments.begin(), increments.end());
    WavePacketState s{config.x0, config.p0};
    traj.x.push_back(s.x);
    traj.p.push_back(s.p);
    for (double dB : increments) {
        traj.z.push_back(collapse_centre(s.x, dB, config.g, config.dt));
        s = step_forward(s, dB, config);
        traj.x.push_back(s.x);
        traj.p.push_back(s.p);
    }
    return traj;
}

/// Forward trajectory with dB_i ~ Normal(0, dt) i.i.d.
inline WavePacketTrajectory simulate_forward(const QmuplConfig &config, stats::PrngStream &rng) {
    config.validate();
    std::vector<double> increments(static_cast<std::size_t>(config.steps));
    const double scale = std::sqrt(config.dt);
    for (auto &dB : increments) {
        dB = scale * rng.gaussian();
    }
    return simulate_with_increments(config, increments);
}

/**
 * Backward reconstruction from the collapse centres alone.  Anchored at
 * x'_n = x_n, p'_n = -p_n, for i = n .. 1:
 *
 *     dB'_{i-1} = g dt (z_{i-1} - x'_i)
 *     x'_{i-1}  = x'_i + (p'_i / m) dt + dB'_{i-1} / sqrt(m)
 *     p'_{i-1}  = p'_i + (g / 2) dB'_{i-1}
 */
inline ReversedTrajectory reverse_trajectory(std::span<const double> z, double xn, double pn,
                                             const QmuplConfig &config) {
    if (z.empty()) {
        throw InsufficientDataError("reverse_trajectory: no collapse centres");
    }
    const auto n = z.size();
    ReversedTrajectory rev;
    rev.x_prime.assign(n + 1, 0.0);
    rev.p_prime.assign(n + 1, 0.0);
    rev.dB_prime.assign(n, 0.0);
    rev.x_prime[n] = xn;
    rev.p_prime[n] = -pn;
    const double root_m = std::sqrt(config.mass);
    for (std::size_t i = n; i >= 1; --i) {
        const double dB = config.g * config.dt * (z[i - 1] - rev.x_prime[i]);
        rev.dB_prime[i - 1] = dB;
        rev.x_prime[i - 1] = rev.x_prime[i] + rev.p_prime[i] / config.mass * config.dt + dB / root_m;
        rev.p_prime[i - 1] = rev.p_prime[i] + 0.5 * config.g * dB;
    }
    return rev;
}

inline ReversedTrajectory reverse_trajectory(const WavePacketTrajectory &forward,
                                             const QmuplConfig &config) {
    return reverse_trajectory(forward.z, forward.x.back(), forward.p.back(), config);
}

/**
 * Forward recursion driven by collapse centres instead of increments:
 * dB_i = g dt (z_i - x_i).  Started from the true initial point it
 * reproduces the forward trajectory, which pins down that the centres carry
 * the complete increment record.
 */
inline WavePacketTrajectory reconstruct_forward(std::span<const double> z, double x0, double p0,
                                                const QmuplConfig &config) {
    std::vector<double> increments;
    increments.reserve(z.size());
    WavePacketState s{x0, p0};
    for (double centre : z) {
        const double dB = config.g * config.dt * (centre - s.x);
        increments.push_back(dB);
        s = step_forward(s, dB, config);
    }
    QmuplConfig c = config;
    c.x0 = x0;
    c.p0 = p0;
    c.steps = static_cast<int>(z.size());
    return simulate_with_increments(c, increments);
}

/// KS test of dB' / sqrt(dt) against the standard normal.
inline stats::TestReport normality_test(std::span<const double> increments, double dt) {
    if (!(dt > 0.0)) {
        throw DomainError("normality_test: dt must be positive");
    }
    if (increments.size() < stats::kMinKsSample) {
        throw InsufficientDataError("normality_test: need at least 10 increments");
    }
    std::vector<double> standardized(increments.begin(), increments.end());
    const double scale = 1.0 / std::sqrt(dt);
    for (auto &v : standardized) {
        v *= scale;
    }
    auto report = stats::ks_test(standardized, stats::standard_normal_cdf);
    report.method = "kolmogorov-smirnov-normal";
    return report;
}

/**
 * Sample correlation between the noise part of each position step,
 * dx - (p_start / m) dt, and the momentum step dp, reading the series in
 * its own index order.  +1 for dynamics obeying the forward law, -1 for a
 * naively time-reversed forward series.
 */
inline double increment_correlation(std::span<const double> x, std::span<const double> p,
                                    double mass, double dt) {
    if (x.size() != p.size() || x.size() < 3) {
        throw DimensionError("increment_correlation: need matching series of length >= 3");
    }
    const std::size_t n = x.size() - 1;
    std::vector<double> noise(n);
    std::vector<double> dp(n);
    for (std::size_t i = 0; i < n; ++i) {
        noise[i] = (x[i + 1] - x[i]) - p[i] / mass * dt;
        dp[i] = p[i + 1] - p[i];
    }
    auto mean = [](const std::vector<double> &v) {
        double s = 0.0;
        for (double e : v) {
            s += e;
        }
        return s / static_cast<double>(v.size());
    };
    const double mu_a = mean(noise);
    const double mu_b = mean(dp);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = noise[i] - mu_a;
        const double b = dp[i] - mu_b;
        sab += a * b;
        saa += a * a;
        sbb += b * b;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw DegenerateTestError("increment_correlation: series has no fluctuations");
    }
    return sab / std::sqrt(saa * sbb);
}

/// Series read in reverse index order.
struct PhaseSeries {
    std::vector<double> x;
    std::vector<double> p;
};

/// Forward trajectory played backward with p -> -p.
inline PhaseSeries naive_time_reverse(const WavePacketTrajectory &forward) {
    PhaseSeries out{{forward.x.rbegin(), forward.x.rend()}, {}};
    out.p.reserve(forward.p.size());
    for (auto it = forward.p.rbegin(); it != forward.p.rend(); ++it) {
        out.p.push_back(-*it);
    }
    return out;
}

/// Reconstructed backward trajectory in its own time order (index n first).
inline PhaseSeries backward_reading(const ReversedTrajectory &rev) {
    return {{rev.x_prime.rbegin(), rev.x_prime.rend()}, {rev.p_prime.rbegin(), rev.p_prime.rend()}};
}

struct EnergyPoint {
    double t = 0.0;
    double mean_p2 = 0.0;
    double standard_error = 0.0;
};

/// Ensemble mean of p^2 against time over independent forward runs.  Run r
/// uses `rng.split(r)`.  Expected growth is p0^2 + (g^2 / 4) t.
inline std::vector<EnergyPoint> ensemble_energy_curve(const QmuplConfig &config, std::size_t runs,
                                                      const stats::PrngStream &rng) {
    config.validate();
    if (runs < 2) {
        throw DomainError("ensemble_energy_curve: need at least two runs");
    }
    const auto n = static_cast<std::size_t>(config.steps);
    std::vector<double> sum(n + 1, 0.0);
    std::vector<double> sum_sq(n + 1, 0.0);
    const double scale = std::sqrt(config.dt);
    for (std::size_t r = 0; r < runs; ++r) {
        auto stream = rng.split(r);
        WavePacketState s{config.x0, config.p0};
        for (std::size_t i = 0; i <= n; ++i) {
            const double p2 = s.p * s.p;
            sum[i] += p2;
            sum_sq[i] += p2 * p2;
            if (i < n) {
                s = step_forward(s, scale * stream.gaussian(), config);
            }
        }
    }
    std::vector<EnergyPoint> curve(n + 1);
    const double count = static_cast<double>(runs);
    for (std::size_t i = 0; i <= n; ++i) {
        const double mean = sum[i] / count;
        const double var = std::max(0.0, (sum_sq[i] - count * mean * mean) / (count - 1.0));
        curve[i] = {static_cast<double>(i) * config.dt, mean, std::sqrt(var / count)};
    }
    return curve;
}

} // namespace timesym::qmupl
