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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "timesym/error.hpp"
#include "timesym/io.hpp"

namespace timesym::cli {

inline const std::vector<std::string> &experiment_names() {
    static const std::vector<std::string> names{"lattice-run", "lattice-batch", "qmupl-run",
                                                "qmupl-batch", "markov-demo",   "energy-demo"};
    return names;
}

/**
 * Every tunable of every experiment.  Defaults reproduce the reference
 * runs with no arguments; `runs == 0` picks the experiment's own default
 * (see `effective_runs`).
 */
struct ExperimentConfig {
    std::string experiment = "lattice-run";
    std::uint64_t seed = 1;
    std::size_t runs = 0;
    std::string out = "out";
    unsigned threads = 0; ///< 0 = one per hardware thread

    // lattice
    int lattice_n = 8; ///< half-width N; the lattice has 2N columns
    double collapse_x = 0.5;
    double theta = std::numbers::pi / 4.0;
    int steps = 100;
    std::string initial = "particle"; ///< particle | vacuum
    int particle_column = 10;         ///< 0-based
    std::size_t bins = 10;

    // qmupl
    double g = 20.0;
    double mass = 1.0;
    double dt = 0.001;
    int n_steps = 1000;
    double x0 = 0.0;
    double p0 = 0.0;
    std::size_t pvalue_bins = 20;
    std::size_t energy_runs = 1000;

    // markov
    std::string kernel; ///< CSV path; empty = built-in three-state chain
    std::size_t observed_state = 0;
    long horizon = 4;
    std::size_t pre_state = 0;

    // momentum walk
    int grid_half_width = 60;
    double step_variance = 0.5;
    int walk_steps = 100;
    int post_tolerance = 1;

    std::size_t effective_runs() const {
        if (runs != 0) {
            return runs;
        }
        if (experiment == "lattice-batch") {
            return 500;
        }
        if (experiment == "qmupl-batch") {
            return 5000;
        }
        if (experiment == "energy-demo") {
            return 20000;
        }
        return 1;
    }

    /// Sets one key from its text form; `where` prefixes error messages.
    void set(std::string_view key, std::string_view value, const std::string &where);

    /// Canonical key=value view of every setting that affects results, in
    /// key order.  `out` and `threads` are excluded.
    std::map<std::string, std::string> to_map() const;

    /// Cross-field checks; module-level checks run when an experiment starts.
    void validate() const;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

template <class T> T parse_number(std::string_view key, std::string_view text, const std::string &where) {
    T value{};
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    std::from_chars_result r{};
    if constexpr (std::is_floating_point_v<T>) {
        r = std::from_chars(first, last, value);
    } else {
        int base = 10;
        if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
            first += 2;
            base = 16;
        }
        r = std::from_chars(first, last, value, base);
    }
    if (text.empty() || r.ec != std::errc{} || r.ptr != last) {
        throw ConfigError(where + ": invalid value for '" + std::string(key) + "': '" +
                          std::string(text) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw ConfigError(where + ": '" + std::string(key) + "' must be finite");
        }
    }
    return value;
}

} // namespace detail

inline void ExperimentConfig::set(std::string_view key, std::string_view value,
                                  const std::string &where) {
    using detail::parse_number;
    const std::string k(key);
    const std::string v(value);
    auto enum_value = [&](std::string &slot, const std::vector<std::string> &allowed) {
        for (const auto &a : allowed) {
            if (a == v) {
                slot = v;
                return;
            }
        }
        throw ConfigError(where + ": invalid value for '" + k + "': '" + v + "'");
    };
    if (k == "experiment") {
        enum_value(experiment, experiment_names());
    } else if (k == "seed") {
        seed = parse_number<std::uint64_t>(k, v, where);
    } else if (k == "runs") {
        runs = parse_number<std::size_t>(k, v, where);
    } else if (k == "out") {
        out = v;
    } else if (k == "threads") {
        threads = parse_number<unsigned>(k, v, where);
    } else if (k == "lattice_n") {
        lattice_n = parse_number<int>(k, v, where);
    } else if (k == "collapse_x") {
        collapse_x = parse_number<double>(k, v, where);
    } else if (k == "theta") {
        theta = parse_number<double>(k, v, where);
    } else if (k == "steps") {
        steps = parse_number<int>(k, v, where);
    } else if (k == "initial") {
        enum_value(initial, {"particle", "vacuum"});
    } else if (k == "particle_column") {
        particle_column = parse_number<int>(k, v, where);
    } else if (k == "bins") {
        bins = parse_number<std::size_t>(k, v, where);
    } else if (k == "g") {
        g = parse_number<double>(k, v, where);
    } else if (k == "mass") {
        mass = parse_number<double>(k, v, where);
    } else if (k == "dt") {
        dt = parse_number<double>(k, v, where);
    } else if (k == "n_steps") {
        n_steps = parse_number<int>(k, v, where);
    } else if (k == "x0") {
        x0 = parse_number<double>(k, v, where);
    } else if (k == "p0") {
        p0 = parse_number<double>(k, v, where);
    } else if (k == "pvalue_bins") {
        pvalue_bins = parse_number<std::size_t>(k, v, where);
    } else if (k == "energy_runs") {
        energy_runs = parse_number<std::size_t>(k, v, where);
    } else if (k == "kernel") {
        kernel = v;
    } else if (k == "observed_state") {
        observed_state = parse_number<std::size_t>(k, v, where);
    } else if (k == "horizon") {
        horizon = parse_number<long>(k, v, where);
    } else if (k == "pre_state") {
        pre_state = parse_number<std::size_t>(k, v, where);
    } else if (k == "grid_half_width") {
        grid_half_width = parse_number<int>(k, v, where);
    } else if (k == "step_variance") {
        step_variance = parse_number<double>(k, v, where);
    } else if (k == "walk_steps") {
        walk_steps = parse_number<int>(k, v, where);
    } else if (k == "post_tolerance") {
        post_tolerance = parse_number<int>(k, v, where);
    } else {
        throw ConfigError(where + ": unknown key '" + k + "'");
    }
}

inline std::map<std::string, std::string> ExperimentConfig::to_map() const {
    using io::format_double;
    auto i = [](auto v) { return std::to_string(v); };
    return {
        {"experiment", experiment},
        {"seed", i(seed)},
        {"runs", i(effective_runs())},
        {"lattice_n", i(lattice_n)},
        {"collapse_x", format_double(collapse_x)},
        {"theta", format_double(theta)},
        {"steps", i(steps)},
        {"initial", initial},
        {"particle_column", i(particle_column)},
        {"bins", i(bins)},
        {"g", format_double(g)},
        {"mass", format_double(mass)},
        {"dt", format_double(dt)},
        {"n_steps", i(n_steps)},
        {"x0", format_double(x0)},
        {"p0", format_double(p0)},
        {"pvalue_bins", i(pvalue_bins)},
        {"energy_runs", i(energy_runs)},
        {"kernel", kernel},
        {"observed_state", i(observed_state)},
        {"horizon", i(horizon)},
        {"pre_state", i(pre_state)},
        {"grid_half_width", i(grid_half_width)},
        {"step_variance", format_double(step_variance)},
        {"walk_steps", i(walk_steps)},
        {"post_tolerance", i(post_tolerance)},
    };
}

inline void ExperimentConfig::validate() const {
    if (experiment == "lattice-batch" && effective_runs() < 50) {
        throw ConfigError("lattice-batch needs runs >= 50, got " + std::to_string(effective_runs()));
    }
    if (experiment == "qmupl-batch" && effective_runs() < 2) {
        throw ConfigError("qmupl-batch needs runs >= 2");
    }
    if (out.empty()) {
        throw ConfigError("output directory must not be empty");
    }
    if (initial == "particle" && (particle_column < 0 || particle_column >= 2 * lattice_n)) {
        throw ConfigError("particle_column " + std::to_string(particle_column) +
                          " outside the lattice of " + std::to_string(2 * lattice_n) + " columns");
    }
    if (bins < 1 || pvalue_bins < 1) {
        throw ConfigError("bin counts must be positive");
    }
    if (horizon < 1) {
        throw ConfigError("horizon must be >= 1");
    }
}

/**
 * Reads `key = value` lines into `config`.  Blank lines and lines starting
 * with '#' are skipped; errors name `source` and the line number.
 */
inline void parse_config(std::istream &in, const std::string &source, ExperimentConfig &config) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto text = detail::trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const std::string where = source + ":" + std::to_string(number);
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + ": expected key = value");
        }
        const auto key = detail::trim(text.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(where + ": missing key");
        }
        config.set(key, detail::trim(text.substr(eq + 1)), where);
    }
}

/// Applies a `key=value` override given on the command line.
inline void apply_override(std::string_view assignment, ExperimentConfig &config) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("--set: expected key=value, got '" + std::string(assignment) + "'");
    }
    config.set(detail::trim(assignment.substr(0, eq)), detail::trim(assignment.substr(eq + 1)),
               "--set");
}

} // namespace timesym::cli
