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

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "timesym/error.hpp"
#include "timesym/io.hpp"
#include "timesym/retrodiction/markov.hpp"

namespace timesym::retrodiction {

/**
 * Kernel CSV.  The header names the source states; each following row is
 * one target state:
 *
 *     target\source,S0,S1
 *     S0,0.9,0.1
 *     S1,0.1,0.9
 *
 * so the cell at (row S_j, column S_i) is R(S_j | S_i).
 */
inline void save_kernel_csv(std::ostream &out, const MarkovModel &model) {
    io::CsvWriter csv(out);
    csv.field("target\\source");
    for (const auto &label : model.labels()) {
        csv.field(label);
    }
    csv.end_row();
    for (std::size_t j = 0; j < model.size(); ++j) {
        csv.field(model.labels()[j]);
        for (std::size_t i = 0; i < model.size(); ++i) {
            csv.field(model.transition(j, i));
        }
        csv.end_row();
    }
}

/// Matrix in the same layout as the kernel CSV (columns = conditioning state).
inline void save_matrix_csv(std::ostream &out, const std::vector<std::string> &labels,
                            const Eigen::MatrixXd &m, const std::string &corner) {
    io::CsvWriter csv(out);
    csv.field(corner);
    for (const auto &label : labels) {
        csv.field(label);
    }
    csv.end_row();
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        csv.field(labels[static_cast<std::size_t>(j)]);
        for (Eigen::Index i = 0; i < m.cols(); ++i) {
            csv.field(m(j, i));
        }
        csv.end_row();
    }
}

namespace detail {

inline double parse_probability(const std::string &text, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception &) {
        throw IoError("line " + std::to_string(line) + ": not a number: '" + text + "'");
    }
}

} // namespace detail

inline MarkovModel load_kernel_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("kernel CSV is empty");
    }
    auto header = io::split_csv_line(line);
    if (header.size() < 2) {
        throw IoError("kernel CSV header needs at least one state");
    }
    std::vector<std::string> labels(header.begin() + 1, header.end());
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXd kernel(n, n);
    int line_no = 1;
    for (Eigen::Index j = 0; j < n; ++j) {
        ++line_no;
        if (!std::getline(in, line)) {
            throw IoError("kernel CSV: expected " + std::to_string(n) + " rows");
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != labels.size() + 1) {
            throw IoError("line " + std::to_string(line_no) + ": wrong number of fields");
        }
        if (fields[0] != labels[static_cast<std::size_t>(j)]) {
            throw IoError("line " + std::to_string(line_no) + ": row label '" + fields[0] +
                          "' does not match column order");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            kernel(j, i) = detail::parse_probability(fields[static_cast<std::size_t>(i) + 1], line_no);
        }
    }
    return MarkovModel(std::move(labels), std::move(kernel));
}

/// Distribution CSV: a header of state labels and one row of probabilities.
inline void save_distribution_csv(std::ostream &out, const std::vector<std::string> &labels,
                                  const Distribution &dist) {
    io::CsvWriter csv(out);
    for (const auto &label : labels) {
        csv.field(label);
    }
    csv.end_row();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        csv.field(dist[i]);
    }
    csv.end_row();
}

inline Distribution load_distribution_csv(std::istream &in, std::vector<std::string> *labels = nullptr) {
    std::string header_line;
    std::string value_line;
    if (!std::getline(in, header_line) || !std::getline(in, value_line)) {
        throw IoError("distribution CSV needs a header and one row");
    }
    const auto header = io::split_csv_line(header_line);
    const auto values = io::split_csv_line(value_line);
    if (header.size() != values.size()) {
        throw IoError("line 2: wrong number of fields");
    }
    Eigen::VectorXd p(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        p(static_cast<Eigen::Index>(i)) = detail::parse_probability(values[i], 2);
    }
    if (labels) {
        *labels = header;
    }
    return Distribution(std::move(p));
}

} // namespace timesym::retrodiction
