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

#include "timesym/error.hpp"
#include "timesym/lattice/state.hpp"

namespace timesym::lattice {

inline void check_collapse_parameter(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("collapse parameter X must lie in [0, 1]");
    }
}

/// Right-hand neighbour of `column` on the periodic lattice.
inline int neighbour(int column, int columns) noexcept { return (column + 1) % columns; }

/**
 * Vertex unitary on qubits (i, i+1 mod 2N).  In the basis (00, 01, 10, 11)
 *
 *     | 1    0        0        0 |
 *     | 0  i sin t   cos t     0 |
 *     | 0   cos t   i sin t    0 |
 *     | 0    0        0        1 |
 *
 * The mixed block is symmetric, so the ordering of 01 and 10 is immaterial.
 */
inline void apply_vertex_inplace(QuantumState &state, int column, double theta) {
    check_column(state, column);
    const int right = neighbour(column, state.columns());
    const std::uint32_t left_mask = std::uint32_t{1} << column;
    const std::uint32_t right_mask = std::uint32_t{1} << right;
    const Amplitude diag{0.0, std::sin(theta)};
    const double off = std::cos(theta);
    auto amps = state.mutable_amplitudes();
    for (auto idx : state.support()) {
        if ((idx & left_mask) && !(idx & right_mask)) {
            const std::uint32_t partner = idx ^ left_mask ^ right_mask;
            const Amplitude a = amps[idx];
            const Amplitude b = amps[partner];
            amps[idx] = diag * a + off * b;
            amps[partner] = off * a + diag * b;
        }
    }
    state.refresh_norm();
}

inline QuantumState apply_vertex(QuantumState state, int column, double theta) {
    apply_vertex_inplace(state, column, theta);
    return state;
}

/// Diagonal entry of J(alpha) on a qubit currently holding `bit`.
inline double jump_factor(std::uint8_t bit, std::uint8_t alpha, double x) noexcept {
    const double scale = 1.0 / std::sqrt(1.0 + x * x);
    return bit == alpha ? scale : x * scale;
}

/**
 * Jump operator J_i(alpha) = (|a><a| + X |1-a><1-a|) / sqrt(1 + X^2) with
 * a = alpha.  The result is not renormalized.
 */
inline void apply_jump_inplace(QuantumState &state, int column, std::uint8_t alpha, double x) {
    check_column(state, column);
    check_collapse_parameter(x);
    if (alpha > 1) {
        throw DomainError("field value must be 0 or 1");
    }
    const double favoured = jump_factor(alpha, alpha, x);
    const double disfavoured = jump_factor(1 - alpha, alpha, x);
    const std::uint32_t mask = std::uint32_t{1} << column;
    auto amps = state.mutable_amplitudes();
    for (auto idx : state.support()) {
        const std::uint8_t bit = (idx & mask) ? 1 : 0;
        amps[idx] *= bit == alpha ? favoured : disfavoured;
    }
    state.refresh_norm();
}

inline QuantumState apply_jump(QuantumState state, int column, std::uint8_t alpha, double x) {
    apply_jump_inplace(state, column, alpha, x);
    return state;
}

/// Born probability that the field on a link at `column` takes the value 1:
/// <psi|J^2(1)|psi> / <psi|psi>.  P(alpha = 0) is the complement.
inline double link_collapse_probability(const QuantumState &state, int column, double x) {
    check_column(state, column);
    check_collapse_parameter(x);
    state.require_nonzero("link_collapse_probability");
    const std::uint32_t mask = std::uint32_t{1} << column;
    double empty = 0.0;
    double occupied = 0.0;
    for (auto idx : state.support()) {
        (idx & mask ? occupied : empty) += std::norm(state[idx]);
    }
    const double x2 = x * x;
    const double p = (occupied + x2 * empty) / ((1.0 + x2) * (occupied + empty));
    return std::clamp(p, 0.0, 1.0);
}

} // namespace timesym::lattice
