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

#include "sca/rl_cluster.hpp"

#include "sca/error.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace sca::rl {

void RlConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw config_error("rl: gamma must lie in [0, 1)");
    if (max_steps < 1)
        throw config_error("rl: max_steps must be >= 1");
    if (!(actor_lr > 0.0) || !(critic_lr > 0.0))
        throw config_error("rl: learning rates must be positive");
    if (actor_hidden < 1 || critic_hidden < 1)
        throw config_error("rl: hidden sizes must be >= 1");
    if (!(sigma_floor > 0.0 && sigma_floor < 1.0))
        throw config_error("rl: sigma_floor must lie in (0, 1)");
    if (!(degenerate_penalty > 0.0))
        throw config_error("rl: degenerate_penalty must be positive");
}

void to_json(nlohmann::json &j, const RlConfig &c) {
    j = {{"gamma", c.gamma},
         {"max_steps", c.max_steps},
         {"actor_lr", c.actor_lr},
         {"critic_lr", c.critic_lr},
         {"actor_hidden", c.actor_hidden},
         {"critic_hidden", c.critic_hidden},
         {"sigma_floor", c.sigma_floor},
         {"degenerate_penalty", c.degenerate_penalty},
         {"labels", c.labels == LabelSource::Mean ? "mean" : "sampled"}};
}

void from_json(const nlohmann::json &j, RlConfig &c) {
    RlConfig d;
    c.gamma = j.value("gamma", d.gamma);
    c.max_steps = j.value("max_steps", d.max_steps);
    c.actor_lr = j.value("actor_lr", d.actor_lr);
    c.critic_lr = j.value("critic_lr", d.critic_lr);
    c.actor_hidden = j.value("actor_hidden", d.actor_hidden);
    c.critic_hidden = j.value("critic_hidden", d.critic_hidden);
    c.sigma_floor = j.value("sigma_floor", d.sigma_floor);
    c.degenerate_penalty = j.value("degenerate_penalty", d.degenerate_penalty);
    const std::string labels = j.value("labels", std::string("mean"));
    if (labels == "mean")
        c.labels = LabelSource::Mean;
    else if (labels == "sampled")
        c.labels = LabelSource::Sampled;
    else
        throw config_error("rl: labels must be 'mean' or 'sampled'");
}

// ---------------------------------------------------------------- networks

Actor::Actor(std::size_t in, std::size_t hidden, double floor, nn::Rng &rng)
    : net({in, hidden, hidden, 2},
          {nn::Activation::Relu, nn::Activation::Relu, nn::Activation::Sigmoid}, rng, "actor"),
      sigma_floor(floor) {}

PolicyOutput Actor::predict(const Eigen::MatrixXd &features) const {
    const Eigen::MatrixXd y = net.predict(features.transpose());
    return {y.row(0).transpose(), y.row(1).transpose().cwiseMax(sigma_floor)};
}

double gaussian_log_density(double a, double mu, double sigma) {
    const double z = (a - mu) / sigma;
    return -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
}

double Actor::log_prob(const Eigen::MatrixXd &features, const Eigen::VectorXd &actions) const {
    const PolicyOutput p = predict(features);
    if (actions.size() != p.mu.size())
        throw config_error("actor: action count does not match the features");
    double sum = 0.0;
    for (Eigen::Index j = 0; j < actions.size(); ++j)
        sum += gaussian_log_density(actions[j], p.mu[j], p.sigma[j]);
    return sum;
}

void Actor::accumulate_log_prob_grad(const Eigen::MatrixXd &features,
                                     const Eigen::VectorXd &actions, double scale) {
    const Eigen::MatrixXd y = net.forward(features.transpose());
    if (actions.size() != y.cols())
        throw config_error("actor: action count does not match the features");
    Eigen::MatrixXd dy(2, y.cols());
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
        const double mu = y(0, j);
        const bool floored = y(1, j) < sigma_floor;
        const double sigma = floored ? sigma_floor : y(1, j);
        const double d = actions[j] - mu;
        dy(0, j) = scale * d / (sigma * sigma);
        dy(1, j) = floored ? 0.0 : scale * (-1.0 / sigma + d * d / (sigma * sigma * sigma));
    }
    net.backward(dy);
}

Critic::Critic(std::size_t in, std::size_t hidden, nn::Rng &rng)
    : net({in, hidden, hidden, 1},
          {nn::Activation::Relu, nn::Activation::Relu, nn::Activation::Linear}, rng, "critic") {}

double Critic::value(const Eigen::VectorXd &state) const { return net.predict(state)(0, 0); }

double Critic::accumulate_value_grad(const Eigen::VectorXd &state, double scale) {
    const double v = net.forward(state)(0, 0);
    net.backward(Eigen::MatrixXd::Constant(1, 1, scale));
    return v;
}

// ---------------------------------------------------------------- environment

std::size_t ClusterAssignment::count1() const {
    std::size_t n = 0;
    for (auto l : labels)
        n += l;
    return n;
}

ClusterAssignment assign(const Eigen::VectorXd &actions) {
    ClusterAssignment a;
    a.actions = actions;
    a.labels.resize(std::size_t(actions.size()));
    std::size_t n1 = 0;
    for (Eigen::Index j = 0; j < actions.size(); ++j) {
        a.labels[std::size_t(j)] = actions[j] >= 0.5;
        n1 += a.labels[std::size_t(j)];
    }
    const double n = double(actions.size());
    a.p1 = n > 0 ? double(n1) / n : 0.0;
    a.p0 = n > 0 ? 1.0 - a.p1 : 0.0;
    return a;
}

ClusterAssignment act(const PolicyOutput &policy, nn::Rng &rng) {
    Eigen::VectorXd actions(policy.mu.size());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index j = 0; j < actions.size(); ++j)
        actions[j] = policy.mu[j] + policy.sigma[j] * normal(rng);
    return assign(actions);
}

ClusterAssignment act(const Actor &actor, const Eigen::MatrixXd &normalized_features,
                      nn::Rng &rng) {
    return act(actor.predict(normalized_features), rng);
}

EnvState zero_state(std::size_t dim) {
    return {Eigen::VectorXd::Zero(Eigen::Index(dim)), Eigen::VectorXd::Zero(Eigen::Index(dim)),
            false};
}

EnvState env_state(const Eigen::MatrixXd &raw_features, const ClusterAssignment &a) {
    if (std::size_t(raw_features.rows()) != a.labels.size())
        throw config_error("env_state: assignment size does not match the features");
    const Eigen::Index d = raw_features.cols();
    Eigen::VectorXd sum0 = Eigen::VectorXd::Zero(d), sum1 = Eigen::VectorXd::Zero(d);
    std::size_t n1 = 0;
    for (Eigen::Index j = 0; j < raw_features.rows(); ++j) {
        if (a.labels[std::size_t(j)]) {
            sum1 += raw_features.row(j).transpose();
            ++n1;
        } else {
            sum0 += raw_features.row(j).transpose();
        }
    }
    const std::size_t n0 = a.labels.size() - n1;
    EnvState st;
    if (n0 == 0 || n1 == 0) {
        st.degenerate = true;
        st.s = Eigen::VectorXd::Zero(d);
        st.normalized = st.s;
        return st;
    }
    st.s = sum0 / double(n0) - sum1 / double(n1);
    const double range = d ? st.s.maxCoeff() - st.s.minCoeff() : 0.0;
    st.normalized = range > 0.0 ? Eigen::VectorXd(st.s / range) : st.s;
    return st;
}

double kl_to_uniform(double p0, double clamp) {
    const double p1 = 1.0 - p0;
    if (!(p0 > 0.0) || !(p1 > 0.0))
        return clamp;
    return std::min(clamp, -(1.0 + 0.5 * (std::log2(p0) + std::log2(p1))));
}

Reward reward(const EnvState &state, const ClusterAssignment &a, double clamp) {
    Reward r;
    if (state.degenerate) {
        r.kl = clamp;
        r.total = -clamp;
        return r;
    }
    Eigen::Index arg = 0;
    r.inter = state.s.size() ? state.s.cwiseAbs().maxCoeff(&arg) : 0.0;
    r.argmax = std::size_t(arg);
    r.kl = kl_to_uniform(a.p0, clamp);
    r.total = r.inter - r.kl;
    return r;
}

// ---------------------------------------------------------------- learning

Agent::Agent(std::size_t dim, const RlConfig &c, std::uint64_t seed) : cfg(c) {
    cfg.validate();
    nn::Rng rng(seed);
    actor = Actor(dim, cfg.actor_hidden, cfg.sigma_floor, rng);
    critic = Critic(dim, cfg.critic_hidden, rng);
    actor_opt = nn::Adam(actor.params(), {.lr = cfg.actor_lr});
    critic_opt = nn::Adam(critic.params(), {.lr = cfg.critic_lr});
}

TdResult td_update(Agent &agent, const Eigen::MatrixXd &normalized_features,
                   const ClusterAssignment &a, double r, const EnvState &prev,
                   const EnvState &next) {
    TdResult td;
    td.value_next = agent.critic.value(next.normalized);
    td.target = r + agent.cfg.gamma * td.value_next;

    agent.critic.zero_grad();
    td.value_prev = agent.critic.accumulate_value_grad(prev.normalized, 1.0);
    td.delta = td.target - td.value_prev;
    if (!std::isfinite(td.delta))
        throw numerical_error("rl: non-finite TD error");
    // d/dV (y - V)^2 = -2 (y - V); the gradient was accumulated with scale 1
    for (nn::Param *p : agent.critic.params())
        p->grad *= -2.0 * td.delta;
    agent.critic_opt.step();

    agent.actor.zero_grad();
    // minimize -delta * sum_j log pi(a_j)
    agent.actor.accumulate_log_prob_grad(normalized_features, a.actions, -td.delta);
    agent.actor_opt.step();
    return td;
}

ClusteringResult run_clustering(const Eigen::MatrixXd &raw_features, const RlConfig &cfg,
                                std::uint64_t seed, const StepCallback &on_step) {
    cfg.validate();
    if (raw_features.rows() < 2)
        throw config_error("rl: at least two feature vectors are required");
    if (!raw_features.allFinite())
        throw numerical_error("rl: non-finite features");
    const std::size_t dim = std::size_t(raw_features.cols());

    // per-dimension (c - mean) / (max - min); constant dimensions map to 0
    Eigen::MatrixXd normalized = Eigen::MatrixXd::Zero(raw_features.rows(), raw_features.cols());
    for (Eigen::Index d = 0; d < raw_features.cols(); ++d) {
        const auto col = raw_features.col(d);
        const double range = col.maxCoeff() - col.minCoeff();
        if (range > 0.0)
            normalized.col(d) = (col.array() - col.mean()) / range;
    }

    Agent agent(dim, cfg, seed);
    nn::Rng rng(seed ^ 0x41435449'4f4e53ULL);
    EnvState prev = zero_state(dim);
    ClusteringResult res;
    bool have_best = false;
    for (std::size_t step = 0; step < cfg.max_steps; ++step) {
        const PolicyOutput policy = agent.actor.predict(normalized);
        const ClusterAssignment a = act(policy, rng);
        EnvState next = env_state(raw_features, a);
        const Reward r = reward(next, a, cfg.degenerate_penalty);
        const bool degenerate = next.degenerate;
        if (degenerate)
            next = prev;
        const TdResult td = td_update(agent, normalized, a, r.total, prev, next);

        const StepRecord rec{step, r.total, r.inter, r.kl, a.p0, td.delta, r.argmax, degenerate};
        res.history.push_back(rec);
        if (on_step)
            on_step(rec);
        if (!rec.degenerate && (!have_best || r.total > res.best.total)) {
            have_best = true;
            res.best = r;
            res.best_step = step;
            res.assignment = a;
            res.state = next;
            res.labels = cfg.labels == LabelSource::Mean ? policy.mu : a.actions;
        }
        prev = next;
    }
    if (!have_best)
        throw numerical_error("rl: every clustering step left a cluster empty");
    return res;
}

std::string history_tsv(const std::vector<StepRecord> &history) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "step\treward\tinter\tkl\tp0\tdelta\targmax\tdegenerate\n";
    for (const auto &r : history)
        os << r.step << '\t' << r.reward << '\t' << r.inter << '\t' << r.kl << '\t' << r.p0
           << '\t' << r.delta << '\t' << r.argmax << '\t' << int(r.degenerate) << '\n';
    return os.str();
}

} // namespace sca::rl
