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

// Command-line experiment runner.
//
//   timesym --experiment lattice-batch --runs 500 --out results/
//   timesym --config run.cfg --set collapse_x=0.3

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "timesym/cli/config.hpp"
#include "timesym/cli/experiments.hpp"

namespace {

using timesym::cli::ExperimentConfig;

// Flags that map one-to-one onto config keys, applied after the file.
const std::vector<std::pair<std::string, std::string>> &flag_keys() {
    static const std::vector<std::pair<std::string, std::string>> keys{
        {"experiment", "experiment"}, {"seed", "seed"},         {"runs", "runs"},
        {"out", "out"},               {"threads", "threads"},   {"lattice-n", "lattice_n"},
        {"collapse-x", "collapse_x"}, {"theta", "theta"},       {"steps", "steps"},
        {"g", "g"},                   {"mass", "mass"},         {"dt", "dt"},
        {"n-steps", "n_steps"},
    };
    return keys;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Time-symmetric collapse model experiments"};
    app.set_version_flag("--version", std::string(TIMESYM_VERSION));

    std::string config_path;
    std::vector<std::string> overrides;
    std::vector<std::optional<std::string>> flag_values(flag_keys().size());
    app.add_option("--config", config_path, "key = value configuration file");
    for (std::size_t k = 0; k < flag_keys().size(); ++k) {
        const auto &[flag, key] = flag_keys()[k];
        app.add_option("--" + flag, flag_values[k], "overrides '" + key + "'");
    }
    app.add_option("--set", overrides, "key=value override, repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw timesym::ConfigError("cannot read config file '" + config_path + "'");
            }
            timesym::cli::parse_config(in, config_path, config);
        }
        for (std::size_t k = 0; k < flag_keys().size(); ++k) {
            if (flag_values[k]) {
                config.set(flag_keys()[k].second, *flag_values[k], "--" + flag_keys()[k].first);
            }
        }
        for (const auto &o : overrides) {
            timesym::cli::apply_override(o, config);
        }
        const auto summary = timesym::cli::run_experiment(config);
        for (const auto &line : summary.lines) {
            std::cout << line << '\n';
        }
        std::cout << "wrote " << summary.artifacts.size() << " files to " << config.out << '\n';
        return 0;
    } catch (const std::exception &e) {
        std::cerr << "timesym: " << e.what() << '\n';
        return timesym::cli::exit_code_for(std::current_exception());
    }
}
