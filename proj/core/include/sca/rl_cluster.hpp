/*
 * SPDX-FileCopyrightText: Copyright 2026 The ascon-sca authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "sca/nn.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sca::rl {

enum class LabelSource { Mean, Sampled };

struct RlConfig {
    double gamma = 0.9;
    std::size_t max_steps = 350;
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    std::size_t actor_hidden = 512;
    std::size_t critic_hidden = 256;
    double sigma_floor = 1e-3;
    double degenerate_penalty = 10.0; ///< KL value used for an empty cluster, and the KL clamp
    LabelSource labels = LabelSource::Mean;

    void validate() const;
};

void to_json(nlohmann::json &j, const RlConfig &c);
void from_json(const nlohmann::json &j, RlConfig &c);

struct PolicyOutput {
    Eigen::VectorXd mu;
    Eigen::VectorXd sigma; ///< standard deviation, floored
};

/// Two sigmoid outputs (mu, sigma) per trace from a ReLU MLP.
class Actor {
  public:
    Actor() = default;
    Actor(std::size_t in, std::size_t hidden, double sigma_floor, nn::Rng &rng);

    /// `features` holds one trace per row.
    PolicyOutput predict(const Eigen::MatrixXd &features) const;

    /// sum_j log N(a_j; mu_j, sigma_j)
    double log_prob(const Eigen::MatrixXd &features, const Eigen::VectorXd &actions) const;
    /// Adds scale * d/dtheta sum_j log N(a_j; mu_j, sigma_j) to the gradients.
    void accumulate_log_prob_grad(const Eigen::MatrixXd &features, const Eigen::VectorXd &actions,
                                  double scale);

    std::vector<nn::Param *> params() { return net.params(); }
    void zero_grad() { net.zero_grad(); }

    nn::Mlp net;
    double sigma_floor = 1e-3;
};

/// Scalar value of a D-dimensional normalized state.
class Critic {
  public:
    Critic() = default;
    Critic(std::size_t in, std::size_t hidden, nn::Rng &rng);

    double value(const Eigen::VectorXd &state) const;
    /// Adds scale * dV/dtheta at `state` to the gradients and returns V.
    double accumulate_value_grad(const Eigen::VectorXd &state, double scale);

    std::vector<nn::Param *> params() { return net.params(); }
    void zero_grad() { net.zero_grad(); }

    nn::Mlp net;
};

double gaussian_log_density(double a, double mu, double sigma);

struct ClusterAssignment {
    Eigen::VectorXd actions;
    std::vector<std::uint8_t> labels; ///< 1 for C_1 (a >= 0.5)
    double p0 = 0.0;
    double p1 = 0.0;

    std::size_t count1() const;
};

ClusterAssignment assign(const Eigen::VectorXd &actions);

/// Samples a_j ~ N(mu_j, sigma_j) in trace order and thresholds at 0.5.
ClusterAssignment act(const PolicyOutput &policy, nn::Rng &rng);
ClusterAssignment act(const Actor &actor, const Eigen::MatrixXd &normalized_features,
                      nn::Rng &rng);

struct EnvState {
    Eigen::VectorXd s;          ///< mean(C_0) - mean(C_1)
    Eigen::VectorXd normalized; ///< s / (max(s) - min(s)), or s when the range is 0
    bool degenerate = false;    ///< an empty cluster; s is undefined
};

EnvState env_state(const Eigen::MatrixXd &raw_features, const ClusterAssignment &a);
EnvState zero_state(std::size_t dim);

/// -(1 + 0.5 (log2 p0 + log2 p1)), clamped to `clamp`.
double kl_to_uniform(double p0, double clamp = 10.0);

struct Reward {
    double total = 0.0;
    double inter = 0.0; ///< max_d |s_d|
    double kl = 0.0;
    std::size_t argmax = 0;
};

Reward reward(const EnvState &state, const ClusterAssignment &a, double clamp = 10.0);

struct Agent {
    Agent(std::size_t dim, const RlConfig &cfg, std::uint64_t seed);

    Actor actor;
    Critic critic;
    nn::Adam actor_opt;
    nn::Adam critic_opt;
    RlConfig cfg;
};

struct TdResult {
    double delta = 0.0;
    double target = 0.0;
    double value_prev = 0.0;
    double value_next = 0.0;
};

/// One critic and one actor Adam step for the transition prev -> next.
TdResult td_update(Agent &agent, const Eigen::MatrixXd &normalized_features,
                   const ClusterAssignment &a, double r, const EnvState &prev,
                   const EnvState &next);

struct StepRecord {
    std::size_t step = 0;
    double reward = 0.0;
    double inter = 0.0;
    double kl = 0.0;
    double p0 = 0.0;
    double delta = 0.0;
    std::size_t argmax = 0;
    bool degenerate = false;
};

struct ClusteringResult {
    ClusterAssignment assignment; ///< at the best-reward step
    Eigen::VectorXd labels;       ///< l_j at the best step
    EnvState state;
    Reward best;
    std::size_t best_step = 0;
    std::vector<StepRecord> history;
};

using StepCallback = std::function<void(const StepRecord &)>;

/// act -> env_state -> reward -> td_update for cfg.max_steps. Throws
/// Numerical if every step is degenerate.
ClusteringResult run_clustering(const Eigen::MatrixXd &raw_features, const RlConfig &cfg,
                                std::uint64_t seed, const StepCallback &on_step = {});

std::string history_tsv(const std::vector<StepRecord> &history);

} // namespace sca::rl
