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
#include "sca/trace_prep.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

namespace sca::ae {

struct AutoencoderConfig {
    std::size_t feature_dim = 150;
    std::size_t window = 10;
    std::size_t stride = 5;
    std::size_t epochs = 25;
    std::size_t batch_size = 512;
    double learning_rate = 1e-3;
    /// Feed the decoder the next non-overlapping input window (zeros past the
    /// end) alongside its recurrent state.
    bool decoder_aux_input = true;
    /// Standardize encoder inputs with per-batch statistics while training.
    bool batch_standardize = true;

    void validate() const;
};

void to_json(nlohmann::json &j, const AutoencoderConfig &c);
void from_json(const nlohmann::json &j, AutoencoderConfig &c);

/// A set of equally long window sequences, stored step-major: steps[t] is
/// window x traces, so a mini-batch is a column selection.
struct WindowTensor {
    std::size_t width = 0;
    std::size_t stride = 0;
    std::size_t length = 0; ///< samples per source trace
    std::vector<Eigen::MatrixXd> steps;

    std::size_t step_count() const { return steps.size(); }
    std::size_t trace_count() const { return steps.empty() ? 0 : std::size_t(steps[0].cols()); }
    WindowTensor columns(const std::vector<std::size_t> &idx) const;
};

/// Normalizes every row of `raw` (one trace per row) and slides windows.
WindowTensor prepare_windows(const Eigen::MatrixXd &raw, std::size_t width, std::size_t stride);
WindowTensor stack_windows(const std::vector<prep::WindowSequence> &seqs, std::size_t length);

class Autoencoder {
  public:
    Autoencoder(const AutoencoderConfig &cfg, std::uint64_t seed);

    const AutoencoderConfig &config() const { return cfg_; }
    std::vector<nn::Param *> params();

    /// Encoder-input standardization used outside training (mean, scale).
    double input_mean() const { return input_stats_.value(0, 0); }
    double input_scale() const { return input_stats_.value(1, 0); }
    void set_input_stats(double mean, double scale);

    /// Index offset of the decoder's auxiliary window: ceil(W / S).
    std::size_t aux_offset() const { return (cfg_.window + cfg_.stride - 1) / cfg_.stride; }

    /// One forward/backward pass over a batch; returns the batch MSE.
    /// Gradients accumulate into the parameters.
    double train_batch(const WindowTensor &batch);

    /// Reconstructed windows in forward order (steps[t] is W x traces).
    std::vector<Eigen::MatrixXd> reconstruct_windows(const WindowTensor &data) const;

    Eigen::MatrixXd encode_batch(const WindowTensor &data) const; ///< D x traces

    nn::Lstm encoder;
    nn::Lstm decoder;
    nn::Dense output;

  private:
    std::vector<Eigen::MatrixXd> standardized(const WindowTensor &data, double mean,
                                              double scale) const;
    std::vector<Eigen::MatrixXd> decoder_inputs(const std::vector<Eigen::MatrixXd> &xs) const;

    AutoencoderConfig cfg_;
    nn::Param input_stats_;
};

struct TrainingHistory {
    std::vector<double> epoch_mse; ///< mean training loss of each epoch
};

using EpochCallback = std::function<void(std::size_t epoch, double mse)>;

/// Mini-batch Adam training. Shuffling uses its own stream derived from
/// `seed`. Throws Numerical when the loss becomes non-finite.
TrainingHistory train_autoencoder(Autoencoder &model, const WindowTensor &data,
                                  std::uint64_t seed, const EpochCallback &on_epoch = {});

/// Mean reconstruction MSE over a dataset without updating anything.
double evaluate_mse(const Autoencoder &model, const WindowTensor &data);

/// Final encoder cell states, one trace per row (traces x D). Traces are
/// processed in fixed-size chunks so the result does not depend on `threads`.
Eigen::MatrixXd encode(const Autoencoder &model, const WindowTensor &data, unsigned threads = 1);

/// Overlap-averaged reconstruction, one trace per row. Samples covered by no
/// window are NaN.
Eigen::MatrixXd reconstruct(const Autoencoder &model, const WindowTensor &data,
                            unsigned threads = 1);

/// Per dimension (c - mean) / (max - min) over the rows; constant dimensions
/// become 0.
Eigen::MatrixXd normalize_features(const Eigen::MatrixXd &features);

// Feature dump, little-endian:
//   "SCFT" | version u16 | rows u32 | cols u32 | rows*cols f64 row-major | CRC-32 u32
void write_features(const std::filesystem::path &path, const Eigen::MatrixXd &features);
Eigen::MatrixXd read_features(const std::filesystem::path &path);

} // namespace sca::ae
