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
#include <limits>
#include <numbers>

#include "timesym/error.hpp"

namespace timesym::stats {

/// Standard normal CDF, Phi(x) = erfc(-x / sqrt 2) / 2.
inline double standard_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace detail {

// Lower regularized gamma P(a, x) by its power series; accurate for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by the Legendre continued fraction
// (modified Lentz); accurate for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

/// Regularized upper incomplete gamma function Q(a, x) = Gamma(a, x) / Gamma(a).
inline double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) {
        throw DomainError("regularized_gamma_q: a must be positive");
    }
    if (x < 0.0 || std::isnan(x)) {
        throw DomainError("regularized_gamma_q: x must be non-negative");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x < a + 1.0) {
        return std::clamp(1.0 - detail::gamma_p_series(a, x), 0.0, 1.0);
    }
    return std::clamp(detail::gamma_q_continued_fraction(a, x), 0.0, 1.0);
}

/// Upper tail of the chi-squared distribution with `dof` degrees of freedom.
inline double chi_squared_sf(double x, long dof) {
    if (dof < 1) {
        throw DomainError("chi_squared_sf: degrees of freedom must be >= 1");
    }
    if (x < 0.0 || std::isnan(x)) {
        throw DomainError("chi_squared_sf: statistic must be non-negative");
    }
    return regularized_gamma_q(0.5 * static_cast<double>(dof), 0.5 * x);
}

/**
 * Survival function of the limiting Kolmogorov distribution,
 *
 *     Q_KS(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2).
 *
 * The alternating series is summed until terms drop below 1e-12.  It
 * converges slowly for small lambda, so below lambda = 1.18 the equivalent
 * Jacobi-theta form
 *
 *     1 - sqrt(2 pi) / lambda sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 lambda^2))
 *
 * is used instead.
 */
inline double kolmogorov_sf(double lambda) {
    if (std::isnan(lambda)) {
        throw DomainError("kolmogorov_sf: lambda is NaN");
    }
    if (lambda <= 0.0) {
        return 1.0;
    }
    if (lambda < 1.18) {
        const double scale = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double sum = 0.0;
        for (int k = 1; k < 100; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * scale);
            sum += term;
            if (term < 1e-17) {
                break;
            }
        }
        const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace timesym::stats
