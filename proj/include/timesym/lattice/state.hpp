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
#include <bit>
#include <complex>
#include <cstdint>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "timesym/error.hpp"

namespace timesym::lattice {

using Amplitude = std::complex<double>;

/// Largest supported lattice width (2N).  The state vector has 2^columns
/// entries, so 16 columns is 65,536 amplitudes.
inline constexpr int kMaxColumns = 16;

inline void check_columns(int columns) {
    if (columns < 2 || columns > kMaxColumns || columns % 2 != 0) {
        throw DimensionError("lattice width must be even and in [2, " +
                             std::to_string(kMaxColumns) + "], got " + std::to_string(columns));
    }
}

/// Occupation numbers u_0 .. u_{2N-1} of the lattice qubits.  Columns are
/// 0-based; column i maps to bit i of the basis-state index.
class OccupancyPattern {
  public:
    explicit OccupancyPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        check_columns(static_cast<int>(bits_.size()));
        for (auto b : bits_) {
            if (b > 1) {
                throw DomainError("occupancy entries must be 0 or 1");
            }
        }
    }

    static OccupancyPattern vacuum(int columns) {
        check_columns(columns);
        return OccupancyPattern(std::vector<std::uint8_t>(columns, 0));
    }

    static OccupancyPattern single_particle(int columns, int column) {
        check_columns(columns);
        if (column < 0 || column >= columns) {
            throw DimensionError("particle column out of range");
        }
        std::vector<std::uint8_t> bits(columns, 0);
        bits[column] = 1;
        return OccupancyPattern(std::move(bits));
    }

    int columns() const noexcept { return static_cast<int>(bits_.size()); }
    std::uint8_t operator[](int column) const { return bits_.at(column); }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    std::uint32_t index() const noexcept {
        std::uint32_t idx = 0;
        for (int i = 0; i < columns(); ++i) {
            idx |= static_cast<std::uint32_t>(bits_[i]) << i;
        }
        return idx;
    }

  private:
    std::vector<std::uint8_t> bits_;
};

/**
 * Dense state vector over the 2^(2N) occupancy basis with a cached squared
 * norm.
 *
 * Vertex unitaries and jump operators both conserve particle number, so
 * amplitudes outside the particle-number sectors present at construction
 * stay zero forever.  The state records the basis indices of those sectors
 * (`support()`) and every kernel iterates over them only; for the
 * single-particle runs that is 2N indices instead of 2^(2N).
 */
class QuantumState {
  public:
    QuantumState(int columns, std::vector<Amplitude> amplitudes)
        : columns_(columns), amplitudes_(std::move(amplitudes)) {
        check_columns(columns);
        if (amplitudes_.size() != (std::size_t{1} << columns)) {
            throw DimensionError("amplitude vector length must be 2^columns");
        }
        std::uint32_t sectors = 0;
        for (std::uint32_t idx = 0; idx < amplitudes_.size(); ++idx) {
            if (amplitudes_[idx] != Amplitude{}) {
                sectors |= std::uint32_t{1} << std::popcount(idx);
            }
        }
        for (std::uint32_t idx = 0; idx < amplitudes_.size(); ++idx) {
            if (sectors & (std::uint32_t{1} << std::popcount(idx))) {
                support_.push_back(idx);
            }
        }
        refresh_norm();
    }

    int columns() const noexcept { return columns_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
    const Amplitude &operator[](std::size_t idx) const { return amplitudes_[idx]; }
    std::span<const std::uint32_t> support() const noexcept { return support_; }
    double norm_squared() const noexcept { return norm_squared_; }

    /// Mutable access for the kernels; callers must `refresh_norm()` after
    /// writing and must not populate indices outside `support()`.
    std::span<Amplitude> mutable_amplitudes() noexcept { return amplitudes_; }

    void refresh_norm() noexcept {
        double sum = 0.0;
        for (auto idx : support_) {
            sum += std::norm(amplitudes_[idx]);
        }
        norm_squared_ = sum;
    }

    void require_nonzero(const char *who) const {
        if (!(norm_squared_ > 0.0)) {
            throw InvalidStateError(std::string(who) + ": state has zero norm");
        }
    }

    void normalize() {
        require_nonzero("normalize");
        const double scale = 1.0 / std::sqrt(norm_squared_);
        for (auto idx : support_) {
            amplitudes_[idx] *= scale;
        }
        refresh_norm();
    }

    void conjugate() noexcept {
        for (auto idx : support_) {
            amplitudes_[idx] = std::conj(amplitudes_[idx]);
        }
    }

  private:
    int columns_;
    std::vector<Amplitude> amplitudes_;
    std::vector<std::uint32_t> support_;
    double norm_squared_ = 0.0;
};

inline QuantumState build_basis_state(const OccupancyPattern &pattern) {
    std::vector<Amplitude> amplitudes(std::size_t{1} << pattern.columns());
    amplitudes[pattern.index()] = 1.0;
    return QuantumState(pattern.columns(), std::move(amplitudes));
}

inline void check_column(const QuantumState &state, int column) {
    if (column < 0 || column >= state.columns()) {
        throw DimensionError("column " + std::to_string(column) + " out of range");
    }
}

/// <A_i> = <psi|1_i><1_i|psi> / <psi|psi>.
inline double occupancy_expectation(const QuantumState &state, int column) {
    check_column(state, column);
    state.require_nonzero("occupancy_expectation");
    const std::uint32_t mask = std::uint32_t{1} << column;
    double occupied = 0.0;
    for (auto idx : state.support()) {
        if (idx & mask) {
            occupied += std::norm(state[idx]);
        }
    }
    return std::min(1.0, occupied / state.norm_squared());
}

} // namespace timesym::lattice
