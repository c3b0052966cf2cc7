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
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "timesym/analysis/reversal_test.hpp"
#include "timesym/cli/config.hpp"
#include "timesym/error.hpp"
#include "timesym/io.hpp"
#include "timesym/lattice/evolution.hpp"
#include "timesym/lattice/io.hpp"
#include "timesym/qmupl/wave_packet.hpp"
#include "timesym/retrodiction/io.hpp"
#include "timesym/retrodiction/markov.hpp"
#include "timesym/retrodiction/momentum_walk.hpp"
#include "timesym/stats/prng.hpp"

#ifndef TIMESYM_VERSION
#define TIMESYM_VERSION "unknown"
#endif

namespace timesym::cli {

inline unsigned worker_count(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * Runs `task(0) .. task(count - 1)` on up to `threads` workers and returns
 * the results in index order, so output never depends on scheduling.  The
 * first exception thrown by any task is rethrown after all workers stop.
 */
template <class Result, class Task>
std::vector<Result> run_ordered(std::size_t count, unsigned threads, Task &&task) {
    std::vector<std::optional<Result>> slots(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                slots[i].emplace(task(i));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count);
            }
        }
    };
    const unsigned n = std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    std::vector<Result> results;
    results.reserve(count);
    for (auto &s : slots) {
        results.push_back(std::move(*s));
    }
    return results;
}

/// Writes artifacts into one directory and records a manifest line per file.
class OutputSet {
  public:
    explicit OutputSet(const ExperimentConfig &config)
        : dir_(config.out), experiment_(config.experiment), seed_(config.seed),
          parameters_(config.to_map()) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_)) {
            throw IoError("cannot create output directory '" + dir_.string() + "'");
        }
    }

    void write(const std::string &name, const std::function<void(std::ostream &)> &body) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + path.string() + "' for writing");
        }
        body(out);
        out.flush();
        if (!out) {
            throw IoError("write to '" + path.string() + "' failed");
        }
        artifacts_.push_back(name);
    }

    /// Writes manifest.jsonl; one JSON object per artifact, no timestamps.
    void finish() {
        const auto path = dir_ / "manifest.jsonl";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + path.string() + "' for writing");
        }
        for (const auto &name : artifacts_) {
            nlohmann::json line;
            line["artifact"] = name;
            line["experiment"] = experiment_;
            line["parameters"] = parameters_;
            line["seed"] = seed_;
            line["version"] = TIMESYM_VERSION;
            out << line.dump() << '\n';
        }
        if (!out) {
            throw IoError("write to '" + path.string() + "' failed");
        }
    }

    const std::vector<std::string> &artifacts() const noexcept { return artifacts_; }
    const std::filesystem::path &directory() const noexcept { return dir_; }

  private:
    std::filesystem::path dir_;
    std::string experiment_;
    std::uint64_t seed_;
    std::map<std::string, std::string> parameters_;
    std::vector<std::string> artifacts_;
};

/// Human-readable result lines plus the artifact list.
struct ExperimentSummary {
    std::vector<std::string> lines;
    std::vector<std::string> artifacts;
};

namespace detail {

inline lattice::LatticeConfig lattice_config(const ExperimentConfig &c) {
    lattice::LatticeConfig l;
    l.half_columns = c.lattice_n;
    l.collapse_x = c.collapse_x;
    l.theta = c.theta;
    l.steps = c.steps;
    l.seed = c.seed;
    l.validate();
    return l;
}

inline lattice::QuantumState lattice_initial(const ExperimentConfig &c) {
    const int columns = 2 * c.lattice_n;
    if (c.initial == "vacuum") {
        return lattice::build_basis_state(lattice::OccupancyPattern::vacuum(columns));
    }
    return lattice::build_basis_state(lattice::OccupancyPattern::single_particle(columns, c.particle_column));
}

inline qmupl::QmuplConfig qmupl_config(const ExperimentConfig &c) {
    qmupl::QmuplConfig q;
    q.g = c.g;
    q.mass = c.mass;
    q.dt = c.dt;
    q.steps = c.n_steps;
    q.x0 = c.x0;
    q.p0 = c.p0;
    q.seed = c.seed;
    q.validate();
    return q;
}

inline void write_histogram(std::ostream &out, const std::vector<std::size_t> &counts) {
    io::CsvWriter csv(out);
    csv.header({"bin_lower", "bin_upper", "count"});
    const double k = static_cast<double>(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        csv.field(static_cast<double>(j) / k).field(static_cast<double>(j + 1) / k).field(counts[j]).end_row();
    }
}

inline void write_uniformity(std::ostream &out, const analysis::UniformityReport &u,
                             std::size_t degenerate) {
    io::CsvWriter csv(out);
    csv.header({"test", "statistic", "parameter", "p_value"});
    csv.field(u.chi_squared.method).field(u.chi_squared.statistic).field(u.chi_squared.parameter);
    csv.field(u.chi_squared.p_value).end_row();
    csv.field(u.ks.method).field(u.ks.statistic).field(u.ks.parameter).field(u.ks.p_value).end_row();
    csv.field("degenerate_runs").empty().field(degenerate).empty().end_row();
}

inline std::string report_line(const std::string &what, const stats::TestReport &r) {
    return what + ": statistic=" + io::format_double(r.statistic) +
           " p=" + io::format_double(r.p_value);
}

/// The three-state chain used when no kernel file is given.
inline retrodiction::MarkovModel default_chain() {
    Eigen::MatrixXd r(3, 3);
    r << 0.8, 0.1, 0.1,
         0.15, 0.7, 0.3,
         0.05, 0.2, 0.6;
    return retrodiction::MarkovModel({"low", "mid", "high"}, r);
}

} // namespace detail

/// Single lattice run: forward and backward occupancy images, field image, CSVs.
inline ExperimentSummary lattice_run(const ExperimentConfig &config) {
    const auto lc = detail::lattice_config(config);
    const auto initial = detail::lattice_initial(config);
    stats::PrngStream rng(config.seed);
    const auto forward = lattice::run_forward(lc, initial, rng);
    const auto backward = lattice::run_backward_from(lc, forward);

    OutputSet out(config);
    out.write("forward_occupancy.pgm", [&](std::ostream &s) { lattice::write_pgm(s, forward.record.occupancy); });
    out.write("field.pgm", [&](std::ostream &s) { lattice::write_pgm(s, forward.record.field); });
    out.write("backward_occupancy.pgm", [&](std::ostream &s) { lattice::write_pgm(s, backward.record.occupancy); });
    out.write("forward.csv", [&](std::ostream &s) { lattice::write_record_csv(s, forward.record); });
    out.write("backward.csv", [&](std::ostream &s) { lattice::write_record_csv(s, backward.record); });

    ExperimentSummary summary;
    try {
        const auto chi = analysis::reversal_chi_squared(forward.record.field, backward.record.probabilities,
                                                        analysis::BinSpec::equal_width(config.bins));
        out.write("reversal_test.csv", [&](std::ostream &s) {
            io::CsvWriter csv(s);
            csv.header({"bin_lower", "bin_upper", "m", "n", "p_bar", "retained"});
            for (const auto &b : chi.bins) {
                csv.field(b.lower).field(b.upper).field(b.m).field(b.n).field(b.p_bar);
                csv.field(b.retained ? 1 : 0).end_row();
            }
        });
        summary.lines.push_back("reversal chi-squared: statistic=" + io::format_double(chi.statistic) +
                                " dof=" + std::to_string(chi.dof) + " p=" + io::format_double(chi.p_value));
    } catch (const DegenerateTestError &e) {
        summary.lines.push_back(std::string("reversal chi-squared: degenerate (") + e.what() + ")");
    }
    out.finish();
    summary.artifacts = out.artifacts();
    return summary;
}

struct LatticeBatchRow {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 0.0;
    bool degenerate = false;
};

/// Many forward+backward runs; one reversal chi-squared p-value per run.
inline ExperimentSummary lattice_batch(const ExperimentConfig &config) {
    config.validate();
    const auto lc = detail::lattice_config(config);
    const auto initial = detail::lattice_initial(config);
    const auto bins = analysis::BinSpec::equal_width(config.bins);
    const stats::PrngStream base(config.seed);
    const auto runs = config.effective_runs();
    const auto rows = run_ordered<LatticeBatchRow>(runs, worker_count(config.threads), [&](std::size_t r) {
        auto rng = base.split(r);
        const auto forward = lattice::run_forward(lc, initial, rng);
        const auto backward = lattice::run_backward_from(lc, forward);
        try {
            const auto chi = analysis::reversal_chi_squared(forward.record.field,
                                                            backward.record.probabilities, bins);
            return LatticeBatchRow{chi.statistic, chi.dof, chi.p_value, false};
        } catch (const DegenerateTestError &) {
            return LatticeBatchRow{0.0, 0, 0.0, true};
        }
    });
    std::vector<double> pvalues;
    std::size_t degenerate = 0;
    for (const auto &row : rows) {
        if (row.degenerate) {
            ++degenerate;
        } else {
            pvalues.push_back(row.p_value);
        }
    }
    if (pvalues.empty()) {
        throw DegenerateTestError("lattice-batch: every run was degenerate");
    }
    const auto u = analysis::pvalue_uniformity(pvalues, config.pvalue_bins);

    OutputSet out(config);
    out.write("pvalues.csv", [&](std::ostream &s) {
        io::CsvWriter csv(s);
        csv.header({"run", "statistic", "dof", "p_value", "status"});
        for (std::size_t r = 0; r < rows.size(); ++r) {
            csv.field(r);
            if (rows[r].degenerate) {
                csv.empty().empty().empty().field("degenerate").end_row();
            } else {
                csv.field(rows[r].statistic).field(rows[r].dof).field(rows[r].p_value).field("ok").end_row();
            }
        }
    });
    out.write("histogram.csv", [&](std::ostream &s) { detail::write_histogram(s, u.histogram); });
    out.write("uniformity.csv", [&](std::ostream &s) { detail::write_uniformity(s, u, degenerate); });
    out.finish();

    ExperimentSummary summary;
    summary.lines.push_back("runs=" + std::to_string(runs) + " degenerate=" + std::to_string(degenerate));
    summary.lines.push_back(detail::report_line("p-value uniformity (chi-squared)", u.chi_squared));
    summary.lines.push_back(detail::report_line("p-value uniformity (KS)", u.ks));
    summary.artifacts = out.artifacts();
    return summary;
}

/// One wave-packet trajectory, its reconstruction backward from the
/// collapse centres, and the checks on both.
inline ExperimentSummary qmupl_run(const ExperimentConfig &config) {
    const auto qc = detail::qmupl_config(config);
    stats::PrngStream rng(config.seed);
    const auto forward = qmupl::simulate_forward(qc, rng);
    const auto reverse = qmupl::reverse_trajectory(forward, qc);

    OutputSet out(config);
    out.write("trajectory.csv", [&](std::ostream &s) {
        io::CsvWriter csv(s);
        csv.header({"i", "t", "x", "p"});
        for (std::size_t i = 0; i < forward.x.size(); ++i) {
            csv.field(i).field(static_cast<double>(i) * qc.dt).field(forward.x[i]).field(forward.p[i]).end_row();
        }
    });
    out.write("centres.csv", [&](std::ostream &s) {
        io::CsvWriter csv(s);
        csv.header({"i", "t", "z", "dB"});
        for (std::size_t i = 0; i < forward.z.size(); ++i) {
            csv.field(i).field(static_cast<double>(i) * qc.dt).field(forward.z[i]).field(forward.dB[i]).end_row();
        }
    });
    out.write("reversal.csv", [&](std::ostream &s) {
        io::CsvWriter csv(s);
        csv.header({"i", "t", "x_prime", "p_prime", "dB_prime"});
        for (std::size_t i = 0; i < reverse.x_prime.size(); ++i) {
            csv.field(i).field(static_cast<double>(i) * qc.dt).field(reverse.x_prime[i]).field(reverse.p_prime[i]);
            if (i < reverse.dB_prime.size()) {
                csv.field(reverse.dB_prime[i]);
            } else {
                csv.empty();
            }
            csv.end_row();
        }
    });

    const auto forward_ks = qmupl::normality_test(forward.dB, qc.dt);
    const auto reverse_ks = qmupl::normality_test(reverse.dB_prime, qc.dt);
    const auto naive = qmupl::naive_time_reverse(forward);
    const auto back = qmupl::backward_reading(reverse);
    const double c_forward = qmupl::increment_correlation(forward.x, forward.p, qc.mass, qc.dt);
    const double c_naive = qmupl::increment_correlation(naive.x, naive.p, qc.mass, qc.dt);
    const double c_back = qmupl::increment_correlation(back.x, back.p, qc.mass, qc.dt);
    out.write("summary.csv", [&](std::ostream &s) {
        io::CsvWriter csv(s);
        csv.header({"quantity", "value"});
        csv.field("forward_ks_statistic").field(forward_ks.statistic).end_row();
        csv.field("forward_ks_p_value").field(forward_ks.p_value).end_row();
        csv.field("reverse_ks_statistic").field(reverse_ks.statistic).end_row();
        csv.field("reverse_ks_p_value").field(reverse_ks.p_value).end_row();
        csv.field("correlation_forward").field(c_forward).end_row();
        csv.field("correlation_naive_reverse").field(c_naive).end_row();
        csv.field("correlation_backward").field(c_back).end_row();
    });
    out.finish();

    ExperimentSummary summary;
    summary.lines.push_back(detail::report_line("reverse increments normality (KS)", reverse_ks));
    summary.lines.push_back("correlations: forward=" + io::format_double(c_forward) +
                            " naive=" + io::format_double(c_naive) + " backward=" + io::format_double(c_back));
    summary.artifacts = out.artifacts();
    return summary;
}

/// KS p-value of the reconstructed increments for many independent runs.
inline ExperimentSummary qmupl_batch(const ExperimentConfig &config) {
    config.validate();
    const auto qc = detail::qmupl_config(config);
    const stats::PrngStream base(config.seed);
    const auto runs = config.effective_runs();
    const auto reports = run_ordered<stats::TestReport>(runs, worker_count(config.threads), [&](std::size_t r) {
        auto rng = base.split(r);
        const auto forward = qmupl::simulate_forward(qc, rng);
        return qmupl::normality_test(qmupl::reverse_trajectory(forward, qc).dB_prime, qc.dt);
    });
    std::vector<double> pvalues;
    for (const auto &rep : reports) {
        pvalues.push_back(rep.p_value);
    }
    const auto u = analysis::pvalue_uniformity(pvalues, config.pvalue_bins);

    OutputSet out(config);
    out.write("pvalues.csv", [&](std::ostream &s) {
        io::CsvWriter csv(s);
        csv.header({"run", "statistic", "p_value"});
        for (std::size_t r = 0; r < reports.size(); ++r) {
            csv.field(r).field(reports[r].statistic).field(reports[r].p_value).end_row();
        }
    });
    out.write("histogram.csv", [&](std::ostream &s) { detail::write_histogram(s, u.histogram); });
    out.write("uniformity.csv", [&](std::ostream &s) { detail::write_uniformity(s, u, 0); });
    out.finish();

    ExperimentSummary summary;
    summary.lines.push_back("runs=" + std::to_string(runs));
    summary.lines.push_back(detail::report_line("p-value uniformity (chi-squared)", u.chi_squared));
    summary.lines.push_back(detail::report_line("p-value uniformity (KS)", u.ks));
    summary.artifacts = out.artifacts();
    return summary;
}

/// Retrodiction, equilibrium reverse kernel and boundary-conditioned tables.
inline ExperimentSummary markov_demo(const ExperimentConfig &config) {
    config.validate();
    retrodiction::MarkovModel model = detail::default_chain();
    if (!config.kernel.empty()) {
        std::ifstream in(config.kernel);
        if (!in) {
            throw IoError("cannot read kernel file '" + config.kernel + "'");
        }
        model = retrodiction::load_kernel_csv(in);
    }
    const auto n = model.size();
    if (config.observed_state >= n || config.pre_state >= n) {
        throw ConfigError("observed_state and pre_state must index a state of the " +
                          std::to_string(n) + "-state chain");
    }
    const auto &labels = model.labels();
    const auto prior = retrodiction::Distribution::uniform(n);

    OutputSet out(config);
    ExperimentSummary summary;
    out.write("kernel.csv", [&](std::ostream &s) { retrodiction::save_kernel_csv(s, model); });

    Eigen::MatrixXd retro(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        retro.col(static_cast<Eigen::Index>(j)) = retrodiction::retrodict(model, prior, j, config.horizon).values();
    }
    out.write("retrodiction.csv", [&](std::ostream &s) {
        retrodiction::save_matrix_csv(s, labels, retro, "earlier\\observed");
    });

    if (retrodiction::is_primitive(model)) {
        const auto pe = retrodiction::stationary(model);
        const auto q = retrodiction::equilibrium_retrodiction(model, pe);
        out.write("stationary.csv", [&](std::ostream &s) { retrodiction::save_distribution_csv(s, labels, pe); });
        out.write("equilibrium_reverse.csv", [&](std::ostream &s) {
            retrodiction::save_matrix_csv(s, labels, q, "earlier\\later");
        });
        const double asym = (q - model.kernel()).lpNorm<Eigen::Infinity>();
        summary.lines.push_back("max |Q - R| = " + io::format_double(asym));
    } else {
        summary.lines.push_back("chain has no unique equilibrium; equilibrium tables skipped");
    }

    auto write_series = [&](const std::string &name, auto &&at) {
        out.write(name, [&](std::ostream &s) {
            io::CsvWriter csv(s);
            csv.field("t");
            for (const auto &l : labels) {
                csv.field(l);
            }
            csv.end_row();
            for (long t = 0; t <= config.horizon; ++t) {
                const auto d = at(t);
                csv.field(t);
                for (std::size_t i = 0; i < n; ++i) {
                    csv.field(d[i]);
                }
                csv.end_row();
            }
        });
    };
    const retrodiction::SelectionSpec start{0, config.pre_state};
    const retrodiction::SelectionSpec end{config.horizon, config.observed_state};
    write_series("smoothed.csv", [&](long t) { return retrodiction::smoothed_inference(model, start, end, t); });
    write_series("postselected.csv",
                 [&](long t) { return retrodiction::postselected_prediction(model, end, start, t); });
    out.finish();
    summary.artifacts = out.artifacts();
    return summary;
}

/// Pre- versus post-selected momentum walk energy, and the wave-packet
/// ensemble energy, as curves against time.
inline ExperimentSummary energy_demo(const ExperimentConfig &config) {
    config.validate();
    retrodiction::MomentumWalkConfig walk;
    walk.grid_half_width = config.grid_half_width;
    walk.step_variance = config.step_variance;
    walk.steps = config.walk_steps;
    walk.runs = config.effective_runs();
    walk.post_tolerance = config.post_tolerance;
    walk.selection = retrodiction::Selection::pre;
    const auto pre = retrodiction::momentum_walk_demo(walk, stats::PrngStream(config.seed, 0));
    walk.selection = retrodiction::Selection::post;
    const auto post = retrodiction::momentum_walk_demo(walk, stats::PrngStream(config.seed, 1));
    const auto qc = detail::qmupl_config(config);
    const auto curve = qmupl::ensemble_energy_curve(qc, config.energy_runs, stats::PrngStream(config.seed, 2));

    OutputSet out(config);
    out.write("momentum_energy.csv", [&](std::ostream &s) {
        io::CsvWriter csv(s);
        csv.header({"t", "pre_energy", "pre_se", "post_energy", "post_se", "post_reverse_reading"});
        for (std::size_t t = 0; t < pre.rows.size(); ++t) {
            csv.field(pre.rows[t].t).field(pre.rows[t].forward_reading).field(pre.rows[t].standard_error);
            csv.field(post.rows[t].forward_reading).field(post.rows[t].standard_error);
            csv.field(post.rows[t].reverse_reading).end_row();
        }
    });
    out.write("qmupl_energy.csv", [&](std::ostream &s) {
        io::CsvWriter csv(s);
        csv.header({"t", "mean_p2", "standard_error", "expected"});
        for (const auto &pt : curve) {
            csv.field(pt.t).field(pt.mean_p2).field(pt.standard_error);
            csv.field(qc.p0 * qc.p0 + 0.25 * qc.g * qc.g * pt.t).end_row();
        }
    });
    out.finish();

    ExperimentSummary summary;
    summary.lines.push_back("post-selection kept " + std::to_string(post.survivors) + " of " +
                            std::to_string(post.attempted) + " walkers");
    summary.lines.push_back("wave packet mean p^2 at t=" + io::format_double(curve.back().t) + ": " +
                            io::format_double(curve.back().mean_p2) + " +- " +
                            io::format_double(curve.back().standard_error));
    summary.artifacts = out.artifacts();
    return summary;
}

inline ExperimentSummary run_experiment(const ExperimentConfig &config) {
    config.validate();
    const auto &e = config.experiment;
    if (e == "lattice-run") {
        return lattice_run(config);
    }
    if (e == "lattice-batch") {
        return lattice_batch(config);
    }
    if (e == "qmupl-run") {
        return qmupl_run(config);
    }
    if (e == "qmupl-batch") {
        return qmupl_batch(config);
    }
    if (e == "markov-demo") {
        return markov_demo(config);
    }
    if (e == "energy-demo") {
        return energy_demo(config);
    }
    throw ConfigError("unknown experiment '" + e + "'");
}

/// Process exit code for an exception escaping `run_experiment`.
inline int exit_code_for(const std::exception_ptr &error) {
    try {
        std::rethrow_exception(error);
    } catch (const ConfigError &) {
        return 2;
    } catch (const DomainError &) {
        return 2;
    } catch (const PreconditionError &) {
        return 2;
    } catch (const DimensionError &) {
        return 2;
    } catch (const DegenerateTestError &) {
        return 3;
    } catch (const ResampleExhaustedError &) {
        return 3;
    } catch (const InsufficientDataError &) {
        return 3;
    } catch (const IoError &) {
        return 4;
    } catch (...) {
        return 1;
    }
}

} // namespace timesym::cli
