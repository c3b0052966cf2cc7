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

#include "timesym/stats/prng.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gtest/gtest.h"

using timesym::stats::PrngStream;

TEST(PrngStream, matches_reference_golden_file) {
    std::ifstream in(std::string(TIMESYM_GOLDEN_DIR) + "/prng_first100.txt");
    ASSERT_TRUE(in.good());
    std::string line;
    std::uint64_t last_seed = ~0ULL;
    std::uint64_t last_stream = ~0ULL;
    PrngStream rng(0);
    int checked = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::uint64_t seed, stream, index, value;
        fields >> seed >> stream >> index >> value;
        if (seed != last_seed || stream != last_stream) {
            rng = PrngStream(seed, stream);
            last_seed = seed;
            last_stream = stream;
        }
        ASSERT_EQ(rng.next_u64(), value) << "seed " << seed << " stream " << stream << " draw "
                                         << index;
        ++checked;
    }
    EXPECT_EQ(checked, 500);
}

TEST(PrngStream, first_five_uniforms_are_reproducible) {
    PrngStream a(42);
    PrngStream b(42);
    for (int i = 0; i < 5; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(PrngStream, split_streams_differ_and_are_deterministic) {
    const PrngStream base(7);
    auto s1 = base.split(1);
    auto s1_again = base.split(1);
    auto s2 = base.split(2);
    EXPECT_EQ(s1.next_u64(), s1_again.next_u64());
    EXPECT_NE(base.split(1).next_u64(), s2.next_u64());
    // Nested splits do not collide with first-level ones.
    EXPECT_NE(base.split(1).split(0).next_u64(), base.split(0).next_u64());
}

TEST(PrngStream, gaussian_moments) {
    PrngStream rng(2024);
    constexpr int n = 1000000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(static_cast<double>(n)));
    // sd of the sample variance is sqrt(2 / n) ~ 1.4e-3, so 1% is > 7 sd.
    EXPECT_LT(std::abs(var - 1.0), 0.01);
}

TEST(PrngStream, distinct_streams_have_no_lag_one_correlation) {
    constexpr int n = 1000000;
    for (std::uint64_t id : {0ULL, 1ULL, 99ULL}) {
        auto rng = PrngStream(11).split(id);
        double prev = rng.uniform();
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (int i = 0; i < n; ++i) {
            const double cur = rng.uniform();
            sx += prev;
            sy += cur;
            sxx += prev * prev;
            syy += cur * cur;
            sxy += prev * cur;
            prev = cur;
        }
        const double cov = sxy / n - (sx / n) * (sy / n);
        const double rho =
            cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) * (syy / n - (sy / n) * (sy / n)));
        EXPECT_LT(std::abs(rho), 0.01) << "stream " << id;
    }
    // Cross-correlation between two sibling streams.
    auto a = PrngStream(11).split(3);
    auto b = PrngStream(11).split(4);
    double sab = 0.0;
    for (int i = 0; i < n; ++i) {
        sab += (a.uniform() - 0.5) * (b.uniform() - 0.5);
    }
    EXPECT_LT(std::abs(sab / n * 12.0), 0.01);
}

TEST(PrngStream, satisfies_uniform_random_bit_generator) {
    static_assert(std::uniform_random_bit_generator<PrngStream>);
    SUCCEED();
}
