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

#include "sca/nn.hpp"

#include "sca/error.hpp"

#include <cmath>
#include <string>

namespace sca::nn {

std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::Linear:
        return "linear";
    case Activation::Tanh:
        return "tanh";
    case Activation::Sigmoid:
        return "sigmoid";
    case Activation::Relu:
        return "relu";
    }
    return "?";
}

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd &x) {
    return (1.0 + (-x.array()).exp()).inverse().matrix();
}

std::string shape(const Eigen::MatrixXd &m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

} // namespace

Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd &pre) {
    switch (a) {
    case Activation::Linear:
        return pre;
    case Activation::Tanh:
        return pre.array().tanh().matrix();
    case Activation::Sigmoid:
        return sigmoid(pre);
    case Activation::Relu:
        return pre.cwiseMax(0.0);
    }
    return pre;
}

Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd &y) {
    switch (a) {
    case Activation::Linear:
        return Eigen::MatrixXd::Ones(y.rows(), y.cols());
    case Activation::Tanh:
        return (1.0 - y.array().square()).matrix();
    case Activation::Sigmoid:
        return (y.array() * (1.0 - y.array())).matrix();
    case Activation::Relu:
        return (y.array() > 0.0).cast<double>().matrix();
    }
    return y;
}

void init_uniform(Eigen::MatrixXd &m, std::size_t fan_in, Rng &rng) {
    const double bound = 1.0 / std::sqrt(double(std::max<std::size_t>(fan_in, 1)));
    std::uniform_real_distribution<double> u(-bound, bound);
    // column-major fill order keeps initialization independent of Eigen internals
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            m(i, j) = u(rng);
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::size_t in, std::size_t out, Activation act, Rng &rng, std::string name)
    : act_(act) {
    if (in == 0 || out == 0)
        throw config_error("dense layer dimensions must be >= 1");
    weights.name = name + ".W";
    weights.value.resize(Eigen::Index(out), Eigen::Index(in));
    init_uniform(weights.value, in, rng);
    bias.name = name + ".b";
    bias.value.resize(Eigen::Index(out), 1);
    init_uniform(bias.value, in, rng);
    weights.zero_grad();
    bias.zero_grad();
}

void Dense::check_input(const Eigen::MatrixXd &x) const {
    if (x.rows() != weights.value.cols())
        throw config_error("dense " + weights.name + ": input has " + std::to_string(x.rows()) +
                           " rows, expected " + std::to_string(weights.value.cols()));
}

Eigen::MatrixXd Dense::predict(const Eigen::MatrixXd &x) const {
    check_input(x);
    Eigen::MatrixXd pre = weights.value * x;
    pre.colwise() += bias.value.col(0);
    return activate(act_, pre);
}

Eigen::MatrixXd Dense::forward(const Eigen::MatrixXd &x) {
    y_ = predict(x);
    x_ = x;
    cached_ = true;
    return y_;
}

Eigen::MatrixXd Dense::backward(const Eigen::MatrixXd &dy) {
    if (!cached_)
        throw config_error("dense " + weights.name + ": backward without forward");
    if (dy.rows() != y_.rows() || dy.cols() != y_.cols())
        throw config_error("dense " + weights.name + ": upstream gradient " + shape(dy) +
                           " does not match output " + shape(y_));
    const Eigen::MatrixXd dpre = (dy.array() * activation_derivative(act_, y_).array()).matrix();
    weights.grad.noalias() += dpre * x_.transpose();
    bias.grad.noalias() += dpre.rowwise().sum();
    return weights.value.transpose() * dpre;
}

// ---------------------------------------------------------------- Mlp

Mlp::Mlp(const std::vector<std::size_t> &dims, const std::vector<Activation> &acts, Rng &rng,
         const std::string &name) {
    if (dims.size() < 2 || acts.size() != dims.size() - 1)
        throw config_error("mlp: need n+1 dimensions for n activations");
    for (std::size_t k = 0; k + 1 < dims.size(); ++k)
        layers.emplace_back(dims[k], dims[k + 1], acts[k], rng, name + "." + std::to_string(k));
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd &x) {
    Eigen::MatrixXd y = x;
    for (auto &l : layers)
        y = l.forward(y);
    return y;
}

Eigen::MatrixXd Mlp::predict(const Eigen::MatrixXd &x) const {
    Eigen::MatrixXd y = x;
    for (const auto &l : layers)
        y = l.predict(y);
    return y;
}

Eigen::MatrixXd Mlp::backward(const Eigen::MatrixXd &dy) {
    Eigen::MatrixXd g = dy;
    for (auto it = layers.rbegin(); it != layers.rend(); ++it)
        g = it->backward(g);
    return g;
}

std::vector<Param *> Mlp::params() {
    std::vector<Param *> out;
    for (auto &l : layers)
        for (Param *p : l.params())
            out.push_back(p);
    return out;
}

void Mlp::zero_grad() {
    for (Param *p : params())
        p->zero_grad();
}

// ---------------------------------------------------------------- Lstm

Lstm::Lstm(std::size_t in, std::size_t hidden, Rng &rng, std::string name)
    : in_(in), hidden_(hidden) {
    if (in == 0 || hidden == 0)
        throw config_error("lstm dimensions must be >= 1");
    const Eigen::Index h = Eigen::Index(hidden);
    weights.name = name + ".W";
    weights.value.resize(4 * h, Eigen::Index(in + hidden));
    init_uniform(weights.value, in + hidden, rng);
    bias.name = name + ".b";
    bias.value.resize(4 * h, 1);
    init_uniform(bias.value, in + hidden, rng);
    bias.value.middleRows(h, h).setOnes(); // forget gate
    weights.zero_grad();
    bias.zero_grad();
}

Lstm::State Lstm::step(const Eigen::MatrixXd &x, const State &prev) const {
    const Eigen::Index h = Eigen::Index(hidden_);
    if (x.rows() != Eigen::Index(in_))
        throw config_error("lstm " + weights.name + ": input has " + std::to_string(x.rows()) +
                           " rows, expected " + std::to_string(in_));
    if (prev.h.rows() != h || prev.c.rows() != h || prev.h.cols() != x.cols() ||
        prev.c.cols() != x.cols())
        throw config_error("lstm " + weights.name + ": state shape mismatch");
    Eigen::MatrixXd pre = weights.value.leftCols(Eigen::Index(in_)) * x;
    pre.noalias() += weights.value.rightCols(h) * prev.h;
    pre.colwise() += bias.value.col(0);
    const auto g = pre.topRows(h).array().tanh();
    const Eigen::MatrixXd fio = sigmoid(pre.bottomRows(3 * h));
    State next;
    next.c = (fio.topRows(h).array() * prev.c.array() + fio.middleRows(h, h).array() * g).matrix();
    next.h = (fio.bottomRows(h).array() * next.c.array().tanh()).matrix();
    return next;
}

Lstm::State Lstm::predict(const std::vector<Eigen::MatrixXd> &xs, const State &init) const {
    State s = init;
    for (const auto &x : xs)
        s = step(x, s);
    return s;
}

const std::vector<Eigen::MatrixXd> &Lstm::forward(const std::vector<Eigen::MatrixXd> &xs,
                                                  const State &init) {
    const Eigen::Index h = Eigen::Index(hidden_);
    cache_.clear();
    hs_.clear();
    cache_.reserve(xs.size());
    hs_.reserve(xs.size());
    State s = init;
    for (const auto &x : xs) {
        if (x.rows() != Eigen::Index(in_))
            throw config_error("lstm " + weights.name + ": input has " +
                               std::to_string(x.rows()) + " rows, expected " +
                               std::to_string(in_));
        if (s.h.rows() != h || s.c.rows() != h || s.h.cols() != x.cols() ||
            s.c.cols() != x.cols())
            throw config_error("lstm " + weights.name + ": state shape mismatch");
        StepCache sc;
        sc.z.resize(Eigen::Index(in_) + h, x.cols());
        sc.z.topRows(Eigen::Index(in_)) = x;
        sc.z.bottomRows(h) = s.h;
        Eigen::MatrixXd pre = weights.value * sc.z;
        pre.colwise() += bias.value.col(0);
        sc.g = pre.topRows(h).array().tanh().matrix();
        const Eigen::MatrixXd fio = sigmoid(pre.bottomRows(3 * h));
        sc.f = fio.topRows(h);
        sc.i = fio.middleRows(h, h);
        sc.o = fio.bottomRows(h);
        sc.c_prev = s.c;
        s.c = (sc.f.array() * s.c.array() + sc.i.array() * sc.g.array()).matrix();
        sc.tanh_c = s.c.array().tanh().matrix();
        s.h = (sc.o.array() * sc.tanh_c.array()).matrix();
        hs_.push_back(s.h);
        cache_.push_back(std::move(sc));
    }
    last_ = s;
    return hs_;
}

Lstm::Grads Lstm::backward(const std::vector<Eigen::MatrixXd> &dh,
                           const Eigen::MatrixXd &dh_last, const Eigen::MatrixXd &dc_last) {
    if (cache_.empty())
        throw config_error("lstm " + weights.name + ": backward without forward");
    const Eigen::Index h = Eigen::Index(hidden_);
    const Eigen::Index in = Eigen::Index(in_);
    const Eigen::Index batch = cache_.front().z.cols();
    const std::size_t steps = cache_.size();
    if (!dh.empty() && dh.size() != steps)
        throw config_error("lstm " + weights.name + ": upstream gradient count mismatch");

    Eigen::MatrixXd dh_next = dh_last.size() ? dh_last : Eigen::MatrixXd::Zero(h, batch);
    Eigen::MatrixXd dc_next = dc_last.size() ? dc_last : Eigen::MatrixXd::Zero(h, batch);
    Grads out;
    out.dx.resize(steps);
    Eigen::MatrixXd dpre(4 * h, batch);
    for (std::size_t t = steps; t-- > 0;) {
        const StepCache &sc = cache_[t];
        Eigen::MatrixXd dht = dh_next;
        if (!dh.empty() && dh[t].size())
            dht += dh[t];
        const auto tc = sc.tanh_c.array();
        const Eigen::ArrayXXd dc =
            dc_next.array() + dht.array() * sc.o.array() * (1.0 - tc.square());
        dpre.topRows(h) = (dc * sc.i.array() * (1.0 - sc.g.array().square())).matrix();
        dpre.middleRows(h, h) =
            (dc * sc.c_prev.array() * sc.f.array() * (1.0 - sc.f.array())).matrix();
        dpre.middleRows(2 * h, h) =
            (dc * sc.g.array() * sc.i.array() * (1.0 - sc.i.array())).matrix();
        dpre.bottomRows(h) = (dht.array() * tc * sc.o.array() * (1.0 - sc.o.array())).matrix();

        weights.grad.noalias() += dpre * sc.z.transpose();
        bias.grad.noalias() += dpre.rowwise().sum();
        const Eigen::MatrixXd dz = weights.value.transpose() * dpre;
        out.dx[t] = dz.topRows(in);
        dh_next = dz.bottomRows(h);
        dc_next = (dc * sc.f.array()).matrix();
    }
    out.dh0 = std::move(dh_next);
    out.dc0 = std::move(dc_next);
    return out;
}

// ---------------------------------------------------------------- losses

double mse(const Eigen::MatrixXd &pred, const Eigen::MatrixXd &target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw config_error("mse: shape mismatch " + shape(pred) + " vs " + shape(target));
    if (pred.size() == 0)
        throw config_error("mse: empty input");
    return (pred - target).squaredNorm() / double(pred.size());
}

Eigen::MatrixXd mse_grad(const Eigen::MatrixXd &pred, const Eigen::MatrixXd &target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw config_error("mse: shape mismatch " + shape(pred) + " vs " + shape(target));
    if (pred.size() == 0)
        throw config_error("mse: empty input");
    return 2.0 * (pred - target) / double(pred.size());
}

// ---------------------------------------------------------------- Adam

Adam::Adam(std::vector<Param *> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
    if (!(cfg_.lr > 0.0) || !(cfg_.beta1 >= 0.0 && cfg_.beta1 < 1.0) ||
        !(cfg_.beta2 >= 0.0 && cfg_.beta2 < 1.0) || !(cfg_.eps > 0.0))
        throw config_error("adam: invalid hyperparameters");
    for (Param *p : params_) {
        m_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
        v_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
    }
}

void Adam::step() {
    for (Param *p : params_) {
        if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols())
            throw config_error("adam: gradient shape mismatch for " + p->name);
        if (!p->grad.allFinite())
            throw numerical_error("adam: non-finite gradient for " + p->name);
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, double(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, double(t_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
        Param &p = *params_[k];
        m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * p.grad;
        v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * p.grad.cwiseProduct(p.grad);
        p.value.array() -=
            cfg_.lr * (m_[k].array() / bc1) / ((v_[k].array() / bc2).sqrt() + cfg_.eps);
    }
}

} // namespace sca::nn
