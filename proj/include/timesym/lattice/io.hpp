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
#include <ostream>
#include <string>

#include "timesym/io.hpp"
#include "timesym/lattice/evolution.hpp"

namespace timesym::lattice {

/// One row per link crossing, in (t, i) order: t,i,probability,alpha,occupancy.
inline void write_record_csv(std::ostream &out, const LatticeRunRecord &record) {
    io::CsvWriter csv(out);
    csv.header({"t", "i", "probability", "alpha", "occupancy"});
    for (int t = 0; t < record.field.steps(); ++t) {
        for (int i = 0; i < record.field.columns(); ++i) {
            csv.field(t).field(i).field(record.probabilities(t, i));
            csv.field(record.field(t, i)).field(record.occupancy(t, i)).end_row();
        }
    }
}

/// 8-bit grey level for a value in [0, 1]; black is 1, white is 0.
inline std::uint8_t grey_level(double value) {
    const double v = std::clamp(value, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - v)));
}

/**
 * Binary PGM (P5), one pixel per link: `columns` wide, `steps` tall.  Time
 * runs upward, so the top row is the last time step.
 */
template <class T> void write_pgm(std::ostream &out, const LinkGrid<T> &grid) {
    out << "P5\n" << grid.columns() << ' ' << grid.steps() << "\n255\n";
    for (int t = grid.steps() - 1; t >= 0; --t) {
        for (int i = 0; i < grid.columns(); ++i) {
            out.put(static_cast<char>(grey_level(static_cast<double>(grid(t, i)))));
        }
    }
}

} // namespace timesym::lattice
