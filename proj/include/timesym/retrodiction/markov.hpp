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
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "timesym/error.hpp"

namespace timesym::retrodiction {

inline constexpr double kStochasticTolerance = 1e-12;

/// Probability distribution over the states of a finite chain.
class Distribution {
  public:
    explicit Distribution(Eigen::VectorXd probabilities) : p_(std::move(probabilities)) {
        if (p_.size() == 0) {
            throw DimensionError("distribution over an empty state set");
        }
        if ((p_.array() < 0.0).any() || !p_.allFinite()) {
            throw DomainError("distribution entries must be finite and non-negative");
        }
        if (std::abs(p_.sum() - 1.0) > kStochasticTolerance) {
            throw DomainError("distribution must sum to 1");
        }
    }

    /// Normalizes non-negative weights; throws ConditioningError when they
    /// sum to zero.
    static Distribution from_weights(const Eigen::VectorXd &weights) {
        const double total = weights.sum();
        if (!(total > 0.0)) {
            throw ConditioningError("conditioning on an event of probability zero");
        }
        return Distribution(weights / total);
    }

    static Distribution uniform(std::size_t n) {
        return Distribution(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / n));
    }

    static Distribution point_mass(std::size_t n, std::size_t state) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        p(static_cast<Eigen::Index>(state)) = 1.0;
        return Distribution(std::move(p));
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(p_.size()); }
    double operator[](std::size_t i) const { return p_(static_cast<Eigen::Index>(i)); }
    const Eigen::VectorXd &values() const noexcept { return p_; }

  private:
    Eigen::VectorXd p_;
};

/**
 * Finite Markov chain with forward kernel R.  Columns index the source:
 * kernel(j, i) = R(S_j | S_i), so every column sums to one and evolving a
 * distribution is the product R p.
 */
class MarkovModel {
  public:
    MarkovModel(std::vector<std::string> labels, Eigen::MatrixXd kernel)
        : labels_(std::move(labels)), kernel_(std::move(kernel)) {
        const auto n = kernel_.rows();
        if (n == 0 || kernel_.cols() != n) {
            throw DimensionError("kernel must be a non-empty square matrix");
        }
        if (labels_.size() != static_cast<std::size_t>(n)) {
            throw DimensionError("need one label per state");
        }
        if ((kernel_.array() < 0.0).any() || !kernel_.allFinite()) {
            throw DomainError("kernel entries must be finite and non-negative");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(kernel_.col(i).sum() - 1.0) > kStochasticTolerance) {
                throw DomainError("kernel column " + labels_[static_cast<std::size_t>(i)] +
                                  " does not sum to 1");
            }
        }
    }

    explicit MarkovModel(const Eigen::MatrixXd &kernel)
        : MarkovModel(default_labels(static_cast<std::size_t>(kernel.rows())), kernel) {}

    static std::vector<std::string> default_labels(std::size_t n) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back("S" + std::to_string(i));
        }
        return labels;
    }

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string> &labels() const noexcept { return labels_; }
    const Eigen::MatrixXd &kernel() const noexcept { return kernel_; }
    /// R(S_to | S_from).
    double transition(std::size_t to, std::size_t from) const {
        return kernel_(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from));
    }

    void check_state(std::size_t s) const {
        if (s >= size()) {
            throw DimensionError("state index " + std::to_string(s) + " out of range");
        }
    }

  private:
    std::vector<std::string> labels_;
    Eigen::MatrixXd kernel_;
};

/// Pre- or post-selection of `state` at integer time `time`.
struct SelectionSpec {
    long time = 0;
    std::size_t state = 0;
};

/// R^steps; the multi-step kernel R_{t+steps | t}.
inline Eigen::MatrixXd kernel_power(const MarkovModel &model, long steps) {
    if (steps < 0) {
        throw DomainError("kernel_power: negative step count");
    }
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(model.kernel().rows(), model.kernel().cols());
    Eigen::MatrixXd base = model.kernel();
    for (long e = steps; e > 0; e >>= 1) {
        if (e & 1) {
            result = result * base;
        }
        base = base * base;
    }
    return result;
}

/// P_{t+steps}(S_j) = sum_i R(S_j | S_i) P_t(S_i).
inline Distribution evolve(const MarkovModel &model, const Distribution &dist, long steps = 1) {
    if (dist.size() != model.size()) {
        throw DimensionError("evolve: distribution size differs from the chain");
    }
    Eigen::VectorXd out = kernel_power(model, steps) * dist.values();
    out = out.cwiseMax(0.0);
    return Distribution(out / out.sum());
}

/// True when some power R^k is strictly positive (irreducible and
/// aperiodic).  Wielandt's bound k <= (n-1)^2 + 1 makes the check finite.
inline bool is_primitive(const MarkovModel &model) {
    const auto n = static_cast<Eigen::Index>(model.size());
    using Pattern = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
    const Pattern step = (model.kernel().array() > 0.0).matrix();
    Pattern reach = step;
    const long bound = (n - 1) * (n - 1) + 1;
    for (long k = 1; k <= bound; ++k) {
        if (reach.all()) {
            return true;
        }
        Pattern next = Pattern::Constant(n, n, false);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index m = 0; m < n; ++m) {
                if (!step(j, m)) {
                    continue;
                }
                for (Eigen::Index i = 0; i < n; ++i) {
                    next(j, i) = next(j, i) || reach(m, i);
                }
            }
        }
        reach = next;
    }
    return reach.all();
}

/// Unique equilibrium P_E by power iteration from the uniform distribution.
inline Distribution stationary(const MarkovModel &model, long max_iterations = 1000000) {
    if (!is_primitive(model)) {
        throw NoEquilibriumError("stationary: kernel is not irreducible and aperiodic");
    }
    Eigen::VectorXd p = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(model.size()),
                                                  1.0 / static_cast<double>(model.size()));
    for (long it = 0; it < max_iterations; ++it) {
        Eigen::VectorXd next = model.kernel() * p;
        next /= next.sum();
        const double change = (next - p).lpNorm<1>();
        p = next;
        if (change < 1e-14) {
            return Distribution(p.cwiseMax(0.0) / p.cwiseMax(0.0).sum());
        }
    }
    throw NoEquilibriumError("stationary: power iteration did not converge");
}

/// Bayes retrodiction P_{t|t+steps}(S_i | S_observed) =
/// R^steps(S_observed | S_i) P_t(S_i) / P_{t+steps}(S_observed).
inline Distribution retrodict(const MarkovModel &model, const Distribution &prior,
                              std::size_t observed, long steps = 1) {
    if (prior.size() != model.size()) {
        throw DimensionError("retrodict: prior size differs from the chain");
    }
    model.check_state(observed);
    const Eigen::MatrixXd r = kernel_power(model, steps);
    const Eigen::VectorXd joint =
        r.row(static_cast<Eigen::Index>(observed)).transpose().cwiseProduct(prior.values());
    return Distribution::from_weights(joint);
}

/**
 * Equilibrium reverse kernel Q(i, j) = R(S_j | S_i) P_E(S_i) / P_E(S_j),
 * column-indexed by the conditioning (later) state S_j, so it has the same
 * orientation as the forward kernel.
 */
inline Eigen::MatrixXd equilibrium_retrodiction(const MarkovModel &model, const Distribution &pe) {
    if (pe.size() != model.size()) {
        throw DimensionError("equilibrium_retrodiction: distribution size differs from the chain");
    }
    if ((pe.values().array() <= 0.0).any()) {
        throw PreconditionError("equilibrium_retrodiction: equilibrium must be strictly positive");
    }
    const Eigen::VectorXd moved = model.kernel() * pe.values();
    if ((moved - pe.values()).lpNorm<Eigen::Infinity>() > 1e-10) {
        throw PreconditionError("equilibrium_retrodiction: distribution is not stationary");
    }
    const auto n = static_cast<Eigen::Index>(model.size());
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            q(i, j) = model.kernel()(j, i) * pe.values()(i) / pe.values()(j);
        }
    }
    return q;
}

/**
 * Two-point conditioned inference at time t between a pre-selection S_0 at
 * `pre.time` and an observation at `observed.time`:
 *
 *     P(S_i) ∝ R^{t_f - t}(S_j | S_i) R^{t - t_0}(S_i | S_0).
 *
 * The closed interval t_0 <= t <= t_f is accepted so the endpoints can be
 * checked directly.
 */
inline Distribution smoothed_inference(const MarkovModel &model, const SelectionSpec &pre,
                                       const SelectionSpec &observed, long t) {
    model.check_state(pre.state);
    model.check_state(observed.state);
    if (!(pre.time <= t && t <= observed.time)) {
        throw DomainError("smoothed_inference: need pre.time <= t <= observed.time");
    }
    const Eigen::MatrixXd to_observed = kernel_power(model, observed.time - t);
    const Eigen::MatrixXd from_pre = kernel_power(model, t - pre.time);
    const auto j = static_cast<Eigen::Index>(observed.state);
    const auto s0 = static_cast<Eigen::Index>(pre.state);
    const Eigen::VectorXd weights =
        to_observed.row(j).transpose().cwiseProduct(from_pre.col(s0));
    return Distribution::from_weights(weights);
}

/**
 * Forward prediction at time t after observing S_j at `observed.time`, under
 * a post-selection of S_0 at the later `post.time`:
 *
 *     P(S_i) ∝ R^{t_0 - t}(S_0 | S_i) R^{t - t_p}(S_i | S_j).
 */
inline Distribution postselected_prediction(const MarkovModel &model, const SelectionSpec &post,
                                            const SelectionSpec &observed, long t) {
    model.check_state(post.state);
    model.check_state(observed.state);
    if (!(observed.time <= t && t <= post.time)) {
        throw DomainError("postselected_prediction: need observed.time <= t <= post.time");
    }
    const Eigen::MatrixXd to_post = kernel_power(model, post.time - t);
    const Eigen::MatrixXd from_observed = kernel_power(model, t - observed.time);
    const auto s0 = static_cast<Eigen::Index>(post.state);
    const auto j = static_cast<Eigen::Index>(observed.state);
    const Eigen::VectorXd weights =
        to_post.row(s0).transpose().cwiseProduct(from_observed.col(j));
    return Distribution::from_weights(weights);
}

/// Ratio P_t(S_i) / P_{t+tau}(S_i) for every state; all entries equal one
/// exactly when the prior is stationary.
inline Eigen::VectorXd shift_ratio(const MarkovModel &model, const Distribution &prior, long tau) {
    const Distribution shifted = evolve(model, prior, tau);
    return prior.values().cwiseQuotient(shifted.values());
}

} // namespace timesym::retrodiction
