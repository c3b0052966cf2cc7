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
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "timesym/error.hpp"
#include "timesym/lattice/operators.hpp"
#include "timesym/lattice/state.hpp"
#include "timesym/stats/prng.hpp"

namespace timesym::lattice {

struct LatticeConfig {
    int half_columns = 8; ///< N; the lattice has 2N columns
    double collapse_x = 0.5;
    double theta = std::numbers::pi / 4.0;
    int steps = 100;
    std::uint64_t seed = 1;

    int columns() const noexcept { return 2 * half_columns; }

    void validate() const {
        if (half_columns < 1) {
            throw DomainError("lattice: N must be >= 1");
        }
        check_columns(columns());
        check_collapse_parameter(collapse_x);
        if (steps < 1) {
            throw DomainError("lattice: steps must be >= 1");
        }
        if (!std::isfinite(theta)) {
            throw DomainError("lattice: theta must be finite");
        }
    }
};

/// Row-major (time step, column) array with one entry per link.
template <class T> class LinkGrid {
  public:
    LinkGrid() = default;
    LinkGrid(int steps, int columns, T fill = T{})
        : steps_(steps), columns_(columns),
          data_(static_cast<std::size_t>(steps) * static_cast<std::size_t>(columns), fill) {}

    int steps() const noexcept { return steps_; }
    int columns() const noexcept { return columns_; }
    std::size_t size() const noexcept { return data_.size(); }

    T &operator()(int t, int column) { return data_[offset(t, column)]; }
    const T &operator()(int t, int column) const { return data_[offset(t, column)]; }

    std::span<const T> flat() const noexcept { return data_; }

    bool same_shape(int steps, int columns) const noexcept {
        return steps_ == steps && columns_ == columns;
    }

    friend bool operator==(const LinkGrid &, const LinkGrid &) = default;

  private:
    std::size_t offset(int t, int column) const noexcept {
        return static_cast<std::size_t>(t) * static_cast<std::size_t>(columns_) +
               static_cast<std::size_t>(column);
    }

    int steps_ = 0;
    int columns_ = 0;
    std::vector<T> data_;
};

/// The realized collapse record alpha, one bit per link.
using StochasticField = LinkGrid<std::uint8_t>;

enum class Direction { forward, backward };

struct LatticeRunRecord {
    StochasticField field;
    LinkGrid<double> probabilities; ///< P(alpha_l = 1) given the evolution applied so far
    LinkGrid<double> occupancy;     ///< <A_l> immediately after the jump on link l
    Direction direction = Direction::forward;
};

struct LatticeRun {
    LatticeRunRecord record;
    QuantumState state; ///< final state (forward) or initial-time state (backward)
};

/// A vertex couples columns `left` and `right = left + 1 mod 2N`; its two
/// outgoing links sit on those columns and are crossed left first.
struct Vertex {
    int left;
    int right;
};

/**
 * Brick pattern: at even steps vertex k couples (2k, 2k+1), at odd steps
 * (2k+1, 2k+2 mod 2N).  Vertices are listed in sweep order, left to right.
 */
inline std::vector<Vertex> vertices_at_step(int columns, int t) {
    check_columns(columns);
    std::vector<Vertex> vertices;
    vertices.reserve(columns / 2);
    const int shift = t % 2;
    for (int k = 0; k < columns / 2; ++k) {
        const int left = 2 * k + shift;
        vertices.push_back({left, neighbour(left, columns)});
    }
    return vertices;
}

namespace detail {

template <class ChooseAlpha>
LatticeRun sweep_forward(const LatticeConfig &config, QuantumState state, ChooseAlpha &&choose) {
    config.validate();
    if (state.columns() != config.columns()) {
        throw DimensionError("initial state width does not match the lattice");
    }
    state.normalize();
    const int columns = config.columns();
    LatticeRunRecord record{StochasticField(config.steps, columns),
                            LinkGrid<double>(config.steps, columns),
                            LinkGrid<double>(config.steps, columns), Direction::forward};
    for (int t = 0; t < config.steps; ++t) {
        for (const auto &v : vertices_at_step(columns, t)) {
            apply_vertex_inplace(state, v.left, config.theta);
            for (int column : {v.left, v.right}) {
                const double p1 = link_collapse_probability(state, column, config.collapse_x);
                const std::uint8_t alpha = choose(t, column, p1);
                apply_jump_inplace(state, column, alpha, config.collapse_x);
                state.normalize();
                record.probabilities(t, column) = p1;
                record.field(t, column) = alpha;
                record.occupancy(t, column) = occupancy_expectation(state, column);
            }
        }
    }
    return {std::move(record), std::move(state)};
}

inline void check_field(const LatticeConfig &config, const StochasticField &field) {
    if (!field.same_shape(config.steps, config.columns())) {
        throw DimensionError("field shape does not match the lattice configuration");
    }
    for (auto a : field.flat()) {
        if (a > 1) {
            throw DomainError("field entries must be 0 or 1");
        }
    }
}

} // namespace detail

/**
 * Time-ordered forward evolution.  Each step sweeps the active vertices left
 * to right; at each vertex the unitary is applied, then each outgoing link
 * samples alpha from its Born probability (one uniform draw, alpha = 1 iff
 * u < P(alpha = 1)), applies the jump and renormalizes.
 */
inline LatticeRun run_forward(const LatticeConfig &config, QuantumState initial,
                              stats::PrngStream &rng) {
    return detail::sweep_forward(config, std::move(initial),
                                 [&rng](int, int, double p1) -> std::uint8_t {
                                     return rng.bernoulli(p1) ? 1 : 0;
                                 });
}

/// Forward evolution that applies a prescribed field instead of sampling.
/// The record's probabilities are the sequential Born probabilities, so
/// `sequential_probability(record)` is the joint probability of `field`.
/// A field of probability zero leaves a null state and throws
/// InvalidStateError.
inline LatticeRun run_forward_with_field(const LatticeConfig &config, QuantumState initial,
                                         const StochasticField &field) {
    detail::check_field(config, field);
    return detail::sweep_forward(config, std::move(initial),
                                 [&field](int t, int column, double) { return field(t, column); });
}

/**
 * Anti-time-ordered evolution of the conjugated state |Phi*>.  Steps run
 * from last to first and each step visits the forward links and vertices in
 * exactly reversed order.  At each link the probability P(alpha = 1 | later
 * field values) is recorded before the jump with the recorded field value
 * is applied.  `final_state` must already be conjugated, see
 * `conjugated()`.  The field is never modified.
 */
inline LatticeRun run_backward(const LatticeConfig &config, const StochasticField &field,
                               QuantumState final_state) {
    config.validate();
    detail::check_field(config, field);
    if (final_state.columns() != config.columns()) {
        throw DimensionError("final state width does not match the lattice");
    }
    final_state.normalize();
    const int columns = config.columns();
    LatticeRunRecord record{field, LinkGrid<double>(config.steps, columns),
                            LinkGrid<double>(config.steps, columns), Direction::backward};
    QuantumState &state = final_state;
    for (int t = config.steps - 1; t >= 0; --t) {
        const auto vertices = vertices_at_step(columns, t);
        for (auto v = vertices.rbegin(); v != vertices.rend(); ++v) {
            for (int column : {v->right, v->left}) {
                record.probabilities(t, column) =
                    link_collapse_probability(state, column, config.collapse_x);
                apply_jump_inplace(state, column, field(t, column), config.collapse_x);
                state.normalize();
                record.occupancy(t, column) = occupancy_expectation(state, column);
            }
            apply_vertex_inplace(state, v->left, config.theta);
        }
    }
    return {std::move(record), std::move(final_state)};
}

inline QuantumState conjugated(QuantumState state) {
    state.conjugate();
    return state;
}

/// Forward run followed by the backward run over the same field, starting
/// from the conjugate of the forward final state.
inline LatticeRun run_backward_from(const LatticeConfig &config, const LatticeRun &forward) {
    return run_backward(config, forward.record.field, conjugated(forward.state));
}

/// Product over links of P(alpha_l = realized value | evolution so far).
inline double sequential_probability(const LatticeRunRecord &record) {
    double log_p = 0.0;
    const auto probs = record.probabilities.flat();
    const auto field = record.field.flat();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const double p = field[k] ? probs[k] : 1.0 - probs[k];
        if (p <= 0.0) {
            return 0.0;
        }
        log_p += std::log(p);
    }
    return std::exp(log_p);
}

} // namespace timesym::lattice
