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

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace sca::nn {

// Batches are column-major: one sample per column, features along rows.

enum class Activation { Linear, Tanh, Sigmoid, Relu };

std::string_view to_string(Activation a);

Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd &pre);
/// d activation / d pre, written in terms of the activated output `y`.
Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd &y);

struct Param {
    std::string name;
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;

    void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

using Rng = std::mt19937_64;

/// uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))
void init_uniform(Eigen::MatrixXd &m, std::size_t fan_in, Rng &rng);

class Dense {
  public:
    Dense() = default;
    Dense(std::size_t in, std::size_t out, Activation act, Rng &rng, std::string name = "dense");

    std::size_t in_dim() const { return std::size_t(weights.value.cols()); }
    std::size_t out_dim() const { return std::size_t(weights.value.rows()); }
    Activation activation() const { return act_; }

    /// Evaluates and caches the input and output for backward().
    Eigen::MatrixXd forward(const Eigen::MatrixXd &x);
    /// Pure evaluation without touching the cache.
    Eigen::MatrixXd predict(const Eigen::MatrixXd &x) const;
    /// Accumulates parameter gradients and returns d loss / d input.
    Eigen::MatrixXd backward(const Eigen::MatrixXd &dy);

    std::vector<Param *> params() { return {&weights, &bias}; }

    Param weights; ///< out x in
    Param bias;    ///< out x 1

  private:
    void check_input(const Eigen::MatrixXd &x) const;

    Activation act_ = Activation::Linear;
    Eigen::MatrixXd x_, y_;
    bool cached_ = false;
};

/// Stack of dense layers.
class Mlp {
  public:
    Mlp() = default;
    Mlp(const std::vector<std::size_t> &dims, const std::vector<Activation> &acts, Rng &rng,
        const std::string &name = "mlp");

    Eigen::MatrixXd forward(const Eigen::MatrixXd &x);
    Eigen::MatrixXd predict(const Eigen::MatrixXd &x) const;
    Eigen::MatrixXd backward(const Eigen::MatrixXd &dy);

    std::vector<Param *> params();
    void zero_grad();

    std::vector<Dense> layers;
};

/// Single LSTM cell unrolled over a sequence. Gate weights are stacked as
/// [g (tanh); f; i; o] acting on the concatenation [x_t; h_{t-1}]:
///   c_t = f_t * c_{t-1} + i_t * g_t,   h_t = o_t * tanh(c_t)
class Lstm {
  public:
    Lstm() = default;
    Lstm(std::size_t in, std::size_t hidden, Rng &rng, std::string name = "lstm");

    std::size_t in_dim() const { return in_; }
    std::size_t hidden_dim() const { return hidden_; }

    struct State {
        Eigen::MatrixXd h, c; ///< hidden x batch
    };

    /// Runs the sequence, caching every step. Returns h_1..h_T.
    const std::vector<Eigen::MatrixXd> &forward(const std::vector<Eigen::MatrixXd> &xs,
                                                const State &init);
    /// Forward without caching; returns the final state.
    State predict(const std::vector<Eigen::MatrixXd> &xs, const State &init) const;
    /// One step without caching.
    State step(const Eigen::MatrixXd &x, const State &prev) const;

    const State &final_state() const { return last_; }
    const std::vector<Eigen::MatrixXd> &outputs() const { return hs_; }

    struct Grads {
        std::vector<Eigen::MatrixXd> dx; ///< per step
        Eigen::MatrixXd dh0, dc0;
    };
    /// Backpropagation through time. `dh[t]` is the external gradient on
    /// h_{t+1} (empty matrix = zero); `dh_last`/`dc_last` act on the final
    /// state (empty = zero). Parameter gradients accumulate.
    Grads backward(const std::vector<Eigen::MatrixXd> &dh, const Eigen::MatrixXd &dh_last,
                   const Eigen::MatrixXd &dc_last);

    std::vector<Param *> params() { return {&weights, &bias}; }

    Param weights; ///< 4H x (in + H)
    Param bias;    ///< 4H x 1

  private:
    struct StepCache {
        Eigen::MatrixXd z;             ///< [x; h_prev]
        Eigen::MatrixXd g, f, i, o;    ///< activated gates
        Eigen::MatrixXd c_prev, tanh_c;
    };

    std::size_t in_ = 0, hidden_ = 0;
    std::vector<StepCache> cache_;
    std::vector<Eigen::MatrixXd> hs_;
    State last_;
};

/// Mean of squared differences over every entry.
double mse(const Eigen::MatrixXd &pred, const Eigen::MatrixXd &target);
Eigen::MatrixXd mse_grad(const Eigen::MatrixXd &pred, const Eigen::MatrixXd &target);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class Adam {
  public:
    Adam() = default;
    Adam(std::vector<Param *> params, AdamConfig cfg = {});

    /// Applies one bias-corrected update from the accumulated gradients.
    /// Throws Numerical (leaving parameters untouched) on non-finite gradients.
    void step();

    std::uint64_t steps() const { return t_; }
    const AdamConfig &config() const { return cfg_; }
    const std::vector<Eigen::MatrixXd> &first_moment() const { return m_; }
    const std::vector<Eigen::MatrixXd> &second_moment() const { return v_; }

  private:
    std::vector<Param *> params_;
    AdamConfig cfg_;
    std::vector<Eigen::MatrixXd> m_, v_;
    std::uint64_t t_ = 0;
};

// Checkpoint, little-endian:
//   "SCCK" | version u16 | tensor count u32
//   count x ( name str | rows u32 | cols u32 | rows*cols f64 column-major )
//   CRC-32 u32 over everything before it
inline constexpr std::uint16_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path &path, const std::vector<Param *> &params);
/// Loads into `params`, which must match the stored names and shapes.
void load_checkpoint(const std::filesystem::path &path, const std::vector<Param *> &params);

} // namespace sca::nn
