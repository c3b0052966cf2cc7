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

#include "timesym/analysis/reversal_test.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gtest/gtest.h"
#include "timesym/error.hpp"
#include "timesym/stats/distributions.hpp"
#include "timesym/stats/prng.hpp"

using namespace timesym::analysis;

TEST(BinSpec, equal_width_and_boundary_assignment) {
    const auto bins = BinSpec::equal_width(10);
    EXPECT_EQ(bins.bin_count(), 10u);
    EXPECT_EQ(bins.bin_of(0.0), 0u);
    EXPECT_EQ(bins.bin_of(0.05), 0u);
    EXPECT_EQ(bins.bin_of(0.5), 5u); // boundary goes to the upper bin
    EXPECT_EQ(bins.bin_of(1.0), 9u);
    EXPECT_DOUBLE_EQ(bins.lower(3), 0.3);
    EXPECT_DOUBLE_EQ(bins.upper(9), 1.0);
    EXPECT_THROW(bins.bin_of(1.2), timesym::DomainError);
    EXPECT_THROW(BinSpec({0.5, 0.4}), timesym::DomainError);
    EXPECT_THROW(BinSpec({0.0}), timesym::DomainError);
}

TEST(PassesNormalityScreen, thresholds) {
    EXPECT_TRUE(passes_normality_screen(10, 0.5));
    EXPECT_FALSE(passes_normality_screen(9, 0.5));
    EXPECT_FALSE(passes_normality_screen(100, 0.04));
    EXPECT_FALSE(passes_normality_screen(100, 0.96));
    EXPECT_TRUE(passes_normality_screen(100, 0.05));
}

TEST(ReversalChiSquared, hand_computed_two_bins) {
    std::vector<double> p;
    std::vector<std::uint8_t> a;
    // 100 events at 0.3 with 40 ones; 100 events at 0.75 with 75 ones.
    for (int k = 0; k < 100; ++k) {
        p.push_back(0.3);
        a.push_back(k < 40 ? 1 : 0);
    }
    for (int k = 0; k < 100; ++k) {
        p.push_back(0.75);
        a.push_back(k < 75 ? 1 : 0);
    }
    const auto r = reversal_chi_squared(p, a, BinSpec::equal_width(10));
    EXPECT_EQ(r.dof, 2u);
    EXPECT_NEAR(r.statistic, 100.0 / 21.0, 1e-12);
    EXPECT_NEAR(r.p_value, std::exp(-50.0 / 21.0), 1e-13);
    EXPECT_EQ(r.bins[3].m, 100u);
    EXPECT_EQ(r.bins[3].n, 40u);
    EXPECT_NEAR(r.bins[3].p_bar, 0.3, 1e-15);
    EXPECT_TRUE(r.bins[7].retained);
    EXPECT_FALSE(r.bins[0].retained);
    EXPECT_TRUE(std::isnan(r.bins[0].p_bar));
}

TEST(ReversalChiSquared, screened_bin_is_dropped) {
    std::vector<double> p(100, 0.5);
    std::vector<std::uint8_t> a(100, 0);
    for (int k = 0; k < 50; ++k) {
        a[k] = 1;
    }
    // Ten events at 0.3: m p_bar = 3 < 5.
    for (int k = 0; k < 10; ++k) {
        p.push_back(0.3);
        a.push_back(1);
    }
    const auto r = reversal_chi_squared(p, a, BinSpec::equal_width(10));
    EXPECT_EQ(r.dof, 1u);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
    EXPECT_FALSE(r.bins[3].retained);
}

TEST(ReversalChiSquared, degenerate_and_malformed_input) {
    std::vector<double> p(5, 0.5);
    std::vector<std::uint8_t> a(5, 1);
    EXPECT_THROW(reversal_chi_squared(p, a, BinSpec::equal_width(10)),
                 timesym::DegenerateTestError);
    std::vector<std::uint8_t> short_a(4, 1);
    EXPECT_THROW(reversal_chi_squared(p, short_a, BinSpec::equal_width(10)),
                 timesym::DimensionError);
}

TEST(ReversalChiSquared, calibrated_outcomes_give_uniform_pvalues) {
    timesym::stats::PrngStream rng(55);
    std::vector<double> pvalues;
    for (int rep = 0; rep < 400; ++rep) {
        std::vector<double> p(2000);
        std::vector<std::uint8_t> a(2000);
        for (std::size_t e = 0; e < p.size(); ++e) {
            p[e] = 0.05 + 0.9 * rng.uniform();
            a[e] = rng.bernoulli(p[e]) ? 1 : 0;
        }
        pvalues.push_back(reversal_chi_squared(p, a, BinSpec::equal_width(10)).p_value);
    }
    const auto u = pvalue_uniformity(pvalues, 10);
    EXPECT_GT(u.ks.p_value, 0.001);
}

TEST(ReversalChiSquared, miscalibrated_outcomes_are_rejected) {
    timesym::stats::PrngStream rng(56);
    std::vector<double> p(5000);
    std::vector<std::uint8_t> a(5000);
    for (std::size_t e = 0; e < p.size(); ++e) {
        p[e] = rng.uniform();
        a[e] = rng.bernoulli(std::min(1.0, p[e] + 0.1)) ? 1 : 0;
    }
    EXPECT_LT(reversal_chi_squared(p, a, BinSpec::equal_width(10)).p_value, 1e-6);
}

TEST(PvalueUniformity, histogram_and_reports) {
    std::vector<double> pv;
    for (int k = 0; k < 100; ++k) {
        pv.push_back((k + 0.5) / 100.0);
    }
    const auto u = pvalue_uniformity(pv, 20);
    ASSERT_EQ(u.histogram.size(), 20u);
    for (auto c : u.histogram) {
        EXPECT_EQ(c, 5u);
    }
    EXPECT_NEAR(u.chi_squared.statistic, 0.0, 1e-12);
    EXPECT_GT(u.ks.p_value, 0.99);
    EXPECT_THROW(pvalue_uniformity(std::vector<double>{}, 20), timesym::InsufficientDataError);
}
