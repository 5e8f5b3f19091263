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

#include "sca/autoencoder.hpp"

#include "sca/container.hpp"
#include "sca/error.hpp"
#include "sca/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

namespace sca::ae {

void AutoencoderConfig::validate() const {
    if (feature_dim < 1)
        throw config_error("autoencoder: feature_dim must be >= 1");
    if (window < 1)
        throw config_error("autoencoder: window must be >= 1");
    if (stride < 1)
        throw config_error("autoencoder: stride must be >= 1");
    if (batch_size < 1)
        throw config_error("autoencoder: batch_size must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw config_error("autoencoder: learning_rate must be positive");
}

void to_json(nlohmann::json &j, const AutoencoderConfig &c) {
    j = {{"feature_dim", c.feature_dim},       {"window", c.window},
         {"stride", c.stride},                 {"epochs", c.epochs},
         {"batch_size", c.batch_size},         {"learning_rate", c.learning_rate},
         {"decoder_aux_input", c.decoder_aux_input}, {"batch_standardize", c.batch_standardize}};
}

void from_json(const nlohmann::json &j, AutoencoderConfig &c) {
    AutoencoderConfig d;
    c.feature_dim = j.value("feature_dim", d.feature_dim);
    c.window = j.value("window", d.window);
    c.stride = j.value("stride", d.stride);
    c.epochs = j.value("epochs", d.epochs);
    c.batch_size = j.value("batch_size", d.batch_size);
    c.learning_rate = j.value("learning_rate", d.learning_rate);
    c.decoder_aux_input = j.value("decoder_aux_input", d.decoder_aux_input);
    c.batch_standardize = j.value("batch_standardize", d.batch_standardize);
}

// ---------------------------------------------------------------- windows

WindowTensor WindowTensor::columns(const std::vector<std::size_t> &idx) const {
    WindowTensor out;
    out.width = width;
    out.stride = stride;
    out.length = length;
    out.steps.reserve(steps.size());
    for (const auto &s : steps) {
        Eigen::MatrixXd m(s.rows(), Eigen::Index(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k)
            m.col(Eigen::Index(k)) = s.col(Eigen::Index(idx[k]));
        out.steps.push_back(std::move(m));
    }
    return out;
}

WindowTensor prepare_windows(const Eigen::MatrixXd &raw, std::size_t width, std::size_t stride) {
    if (width < 1 || stride < 1)
        throw config_error("window width and stride must be >= 1");
    const std::size_t len = std::size_t(raw.cols());
    if (width > len)
        throw config_error("window width " + std::to_string(width) + " exceeds trace length " +
                           std::to_string(len));
    WindowTensor t;
    t.width = width;
    t.stride = stride;
    t.length = len;
    const std::size_t steps = prep::step_count(len, width, stride);
    t.steps.assign(steps, Eigen::MatrixXd(Eigen::Index(width), raw.rows()));
    std::vector<double> row(len);
    for (Eigen::Index j = 0; j < raw.rows(); ++j) {
        for (std::size_t k = 0; k < len; ++k)
            row[k] = raw(j, Eigen::Index(k));
        const auto norm = prep::normalize_trace(std::span<const double>(row));
        for (std::size_t s = 0; s < steps; ++s)
            for (std::size_t k = 0; k < width; ++k)
                t.steps[s](Eigen::Index(k), j) = norm[s * stride + k];
    }
    return t;
}

WindowTensor stack_windows(const std::vector<prep::WindowSequence> &seqs, std::size_t length) {
    WindowTensor t;
    t.length = length;
    if (seqs.empty())
        return t;
    t.width = seqs[0].width;
    t.stride = seqs[0].stride;
    const std::size_t steps = seqs[0].step_count();
    for (const auto &s : seqs)
        if (s.width != t.width || s.stride != t.stride || s.step_count() != steps)
            throw data_error("window sequences have inconsistent shapes");
    t.steps.assign(steps, Eigen::MatrixXd(Eigen::Index(t.width), Eigen::Index(seqs.size())));
    for (std::size_t j = 0; j < seqs.size(); ++j)
        for (std::size_t s = 0; s < steps; ++s)
            t.steps[s].col(Eigen::Index(j)) = seqs[j].steps.row(Eigen::Index(s)).transpose();
    return t;
}

// ---------------------------------------------------------------- model

Autoencoder::Autoencoder(const AutoencoderConfig &cfg, std::uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    nn::Rng rng(seed);
    encoder = nn::Lstm(cfg_.window, cfg_.feature_dim, rng, "encoder");
    decoder = nn::Lstm(cfg_.window, cfg_.feature_dim, rng, "decoder");
    output = nn::Dense(cfg_.feature_dim, cfg_.window, nn::Activation::Linear, rng, "output");
    input_stats_.name = "input_stats";
    input_stats_.value = Eigen::Vector2d(0.0, 1.0);
    input_stats_.zero_grad();
}

std::vector<nn::Param *> Autoencoder::params() {
    return {&encoder.weights, &encoder.bias, &decoder.weights,
            &decoder.bias,    &output.weights, &output.bias, &input_stats_};
}

void Autoencoder::set_input_stats(double mean, double scale) {
    if (!std::isfinite(mean) || !(scale > 0.0) || !std::isfinite(scale))
        throw numerical_error("autoencoder: invalid input statistics");
    input_stats_.value(0, 0) = mean;
    input_stats_.value(1, 0) = scale;
}

std::vector<Eigen::MatrixXd> Autoencoder::standardized(const WindowTensor &data, double mean,
                                                       double scale) const {
    if (data.width != cfg_.window)
        throw config_error("autoencoder: window width " + std::to_string(data.width) +
                           " does not match the trained width " + std::to_string(cfg_.window));
    std::vector<Eigen::MatrixXd> xs;
    xs.reserve(data.steps.size());
    for (const auto &s : data.steps)
        xs.push_back(((s.array() - mean) / scale).matrix());
    return xs;
}

std::vector<Eigen::MatrixXd>
Autoencoder::decoder_inputs(const std::vector<Eigen::MatrixXd> &xs) const {
    const std::size_t steps = xs.size();
    const std::size_t a = aux_offset();
    std::vector<Eigen::MatrixXd> in;
    in.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const std::size_t m = steps - 1 - k;
        if (cfg_.decoder_aux_input && m + a < steps)
            in.push_back(xs[m + a]);
        else
            in.push_back(Eigen::MatrixXd::Zero(xs[m].rows(), xs[m].cols()));
    }
    return in;
}

namespace {

std::pair<double, double> tensor_stats(const WindowTensor &data) {
    double sum = 0.0, sq = 0.0;
    double n = 0.0;
    for (const auto &s : data.steps) {
        sum += s.sum();
        n += double(s.size());
    }
    if (n == 0.0)
        return {0.0, 1.0};
    const double mean = sum / n;
    for (const auto &s : data.steps)
        sq += (s.array() - mean).square().sum();
    const double sd = std::sqrt(sq / n);
    return {mean, sd > 0.0 ? sd : 1.0};
}

} // namespace

double Autoencoder::train_batch(const WindowTensor &batch) {
    const std::size_t steps = batch.step_count();
    const Eigen::Index b = Eigen::Index(batch.trace_count());
    if (steps == 0 || b == 0)
        throw config_error("autoencoder: empty batch");
    const auto [mean, scale] =
        cfg_.batch_standardize ? tensor_stats(batch) : std::pair{input_mean(), input_scale()};
    const auto xs = standardized(batch, mean, scale);
    const Eigen::Index h = Eigen::Index(cfg_.feature_dim);
    const nn::Lstm::State zero{Eigen::MatrixXd::Zero(h, b), Eigen::MatrixXd::Zero(h, b)};

    encoder.forward(xs, zero);
    const auto &hs = decoder.forward(decoder_inputs(xs), encoder.final_state());

    Eigen::MatrixXd hcat(h, Eigen::Index(steps) * b);
    Eigen::MatrixXd target(Eigen::Index(cfg_.window), Eigen::Index(steps) * b);
    for (std::size_t k = 0; k < steps; ++k) {
        hcat.middleCols(Eigen::Index(k) * b, b) = hs[k];
        target.middleCols(Eigen::Index(k) * b, b) = batch.steps[steps - 1 - k];
    }
    const Eigen::MatrixXd y = output.forward(hcat);
    const double loss = nn::mse(y, target);
    if (!std::isfinite(loss))
        throw numerical_error("autoencoder: training loss became non-finite");

    const Eigen::MatrixXd dhcat = output.backward(nn::mse_grad(y, target));
    std::vector<Eigen::MatrixXd> dh(steps);
    for (std::size_t k = 0; k < steps; ++k)
        dh[k] = dhcat.middleCols(Eigen::Index(k) * b, b);
    const auto dg = decoder.backward(dh, {}, {});
    encoder.backward({}, dg.dh0, dg.dc0);
    return loss;
}

std::vector<Eigen::MatrixXd> Autoencoder::reconstruct_windows(const WindowTensor &data) const {
    const std::size_t steps = data.step_count();
    const Eigen::Index b = Eigen::Index(data.trace_count());
    const auto xs = standardized(data, input_mean(), input_scale());
    const Eigen::Index h = Eigen::Index(cfg_.feature_dim);
    const nn::Lstm::State zero{Eigen::MatrixXd::Zero(h, b), Eigen::MatrixXd::Zero(h, b)};
    nn::Lstm::State s = encoder.predict(xs, zero);
    const auto in = decoder_inputs(xs);
    std::vector<Eigen::MatrixXd> out(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        s = decoder.step(in[k], s);
        out[steps - 1 - k] = output.predict(s.h);
    }
    return out;
}

Eigen::MatrixXd Autoencoder::encode_batch(const WindowTensor &data) const {
    const Eigen::Index b = Eigen::Index(data.trace_count());
    const Eigen::Index h = Eigen::Index(cfg_.feature_dim);
    const nn::Lstm::State zero{Eigen::MatrixXd::Zero(h, b), Eigen::MatrixXd::Zero(h, b)};
    return encoder.predict(standardized(data, input_mean(), input_scale()), zero).c;
}

// ---------------------------------------------------------------- training

TrainingHistory train_autoencoder(Autoencoder &model, const WindowTensor &data, std::uint64_t seed,
                                  const EpochCallback &on_epoch) {
    const auto &cfg = model.config();
    const std::size_t n = data.trace_count();
    if (n == 0 || data.step_count() == 0)
        throw config_error("autoencoder: no training data");
    if (data.width != cfg.window)
        throw config_error("autoencoder: data window width does not match the model");
    const auto [mean, scale] = tensor_stats(data);
    model.set_input_stats(mean, scale);

    auto all = model.params();
    all.pop_back(); // input statistics are not trained
    nn::Adam adam(all, {.lr = cfg.learning_rate});
    nn::Rng shuffle_rng(seed ^ 0x53485546464c45ULL);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainingHistory hist;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double total = 0.0;
        for (std::size_t first = 0; first < n; first += cfg.batch_size) {
            const std::size_t last = std::min(n, first + cfg.batch_size);
            const std::vector<std::size_t> idx(order.begin() + std::ptrdiff_t(first),
                                               order.begin() + std::ptrdiff_t(last));
            for (nn::Param *p : all)
                p->zero_grad();
            total += model.train_batch(data.columns(idx)) * double(last - first);
            adam.step();
        }
        hist.epoch_mse.push_back(total / double(n));
        if (on_epoch)
            on_epoch(epoch, hist.epoch_mse.back());
    }
    return hist;
}

namespace {
constexpr std::size_t kChunk = 256;

template <typename Fn> void for_chunks(std::size_t n, unsigned threads, Fn &&fn) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        std::vector<std::size_t> idx;
        for (std::size_t j = c * kChunk; j < std::min(n, (c + 1) * kChunk); ++j)
            idx.push_back(j);
        fn(c, idx);
    });
}
} // namespace

double evaluate_mse(const Autoencoder &model, const WindowTensor &data) {
    const std::size_t n = data.trace_count();
    if (n == 0 || data.step_count() == 0)
        throw config_error("autoencoder: no evaluation data");
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
    for_chunks(n, 1, [&](std::size_t c, const std::vector<std::size_t> &idx) {
        const auto sub = data.columns(idx);
        const auto rec = model.reconstruct_windows(sub);
        for (std::size_t t = 0; t < rec.size(); ++t)
            partial[c] += (rec[t] - sub.steps[t]).squaredNorm();
    });
    const double total = std::accumulate(partial.begin(), partial.end(), 0.0);
    return total / double(n * data.step_count() * data.width);
}

Eigen::MatrixXd encode(const Autoencoder &model, const WindowTensor &data, unsigned threads) {
    const std::size_t n = data.trace_count();
    Eigen::MatrixXd out(Eigen::Index(n), Eigen::Index(model.config().feature_dim));
    if (n == 0)
        return out;
    for_chunks(n, threads, [&](std::size_t, const std::vector<std::size_t> &idx) {
        const Eigen::MatrixXd c = model.encode_batch(data.columns(idx));
        for (std::size_t k = 0; k < idx.size(); ++k)
            out.row(Eigen::Index(idx[k])) = c.col(Eigen::Index(k)).transpose();
    });
    if (!out.allFinite())
        throw numerical_error("autoencoder: non-finite features");
    return out;
}

Eigen::MatrixXd reconstruct(const Autoencoder &model, const WindowTensor &data,
                            unsigned threads) {
    const std::size_t n = data.trace_count();
    Eigen::MatrixXd out(Eigen::Index(n), Eigen::Index(data.length));
    if (n == 0)
        return out;
    const std::size_t steps = data.step_count();
    for_chunks(n, threads, [&](std::size_t, const std::vector<std::size_t> &idx) {
        const auto rec = model.reconstruct_windows(data.columns(idx));
        Eigen::MatrixXd windows(Eigen::Index(steps), Eigen::Index(data.width));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            for (std::size_t t = 0; t < steps; ++t)
                windows.row(Eigen::Index(t)) = rec[t].col(Eigen::Index(k)).transpose();
            const auto avg = prep::overlap_average(windows, data.stride, data.length);
            for (std::size_t s = 0; s < data.length; ++s)
                out(Eigen::Index(idx[k]), Eigen::Index(s)) = avg[s];
        }
    });
    return out;
}

Eigen::MatrixXd normalize_features(const Eigen::MatrixXd &features) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(features.rows(), features.cols());
    if (features.rows() == 0)
        return out;
    for (Eigen::Index d = 0; d < features.cols(); ++d) {
        const auto col = features.col(d);
        const double range = col.maxCoeff() - col.minCoeff();
        if (range > 0.0)
            out.col(d) = (col.array() - col.mean()) / range;
    }
    return out;
}

// ---------------------------------------------------------------- feature dump

namespace {
constexpr char kFeatureMagic[4] = {'S', 'C', 'F', 'T'};
constexpr std::uint16_t kFeatureVersion = 1;
} // namespace

void write_features(const std::filesystem::path &path, const Eigen::MatrixXd &features) {
    io::ByteWriter w;
    w.bytes({reinterpret_cast<const std::uint8_t *>(kFeatureMagic), 4});
    w.u16(kFeatureVersion);
    w.u32(std::uint32_t(features.rows()));
    w.u32(std::uint32_t(features.cols()));
    for (Eigen::Index i = 0; i < features.rows(); ++i)
        for (Eigen::Index j = 0; j < features.cols(); ++j)
            w.f64(features(i, j));
    w.u32(io::crc32(w.buffer()));
    io::write_file(path, w.buffer());
}

Eigen::MatrixXd read_features(const std::filesystem::path &path) {
    using io::FormatError;
    const auto data = io::read_file(path);
    if (data.size() < 4 + 2 + 8 + 4)
        throw FormatError(FormatError::Kind::Truncated, path.string() + ": feature file truncated");
    if (std::memcmp(data.data(), kFeatureMagic, 4) != 0)
        throw FormatError(FormatError::Kind::BadMagic, path.string() + ": not a feature file");
    const std::span<const std::uint8_t> body(data.data(), data.size() - 4);
    io::ByteReader tail(std::span<const std::uint8_t>(data.data() + body.size(), 4));
    if (tail.u32() != io::crc32(body))
        throw FormatError(FormatError::Kind::ChecksumMismatch,
                          path.string() + ": feature file checksum mismatch");
    io::ByteReader r(body);
    r.bytes(4);
    if (const auto v = r.u16(); v != kFeatureVersion)
        throw FormatError(FormatError::Kind::UnsupportedVersion,
                          path.string() + ": unsupported feature file version " + std::to_string(v));
    const auto rows = r.u32();
    const auto cols = r.u32();
    if (r.remaining() != std::size_t(rows) * cols * 8)
        throw FormatError(FormatError::Kind::Truncated, path.string() + ": feature payload size mismatch");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = r.f64();
    return m;
}

} // namespace sca::ae
