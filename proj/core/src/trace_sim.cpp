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

#include "sca/trace_sim.hpp"

#include "sca/error.hpp"
#include "sca/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace sca::sim {

std::string_view to_string(LeakageKind kind) {
    switch (kind) {
    case LeakageKind::HammingWeight:
        return "hw";
    case LeakageKind::Msb:
        return "msb";
    case LeakageKind::GenericNnf:
        return "nnf";
    }
    return "?";
}

LeakageKind leakage_kind_from_string(std::string_view name) {
    if (name == "hw" || name == "hamming_weight")
        return LeakageKind::HammingWeight;
    if (name == "msb")
        return LeakageKind::Msb;
    if (name == "nnf")
        return LeakageKind::GenericNnf;
    throw config_error("unknown leakage kind '" + std::string(name) + "'");
}

void SimConfig::validate() const {
    if (samples_per_clock < 1)
        throw config_error("samples_per_clock must be >= 1");
    if (sbox_count < 1 || sbox_count > ascon::kSboxColumns)
        throw config_error("sbox_count must be in [1, 64]");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw config_error("noise_sigma must be finite and >= 0");
    if (2 * jitter_max >= samples_per_clock)
        throw config_error("jitter_max must be < samples_per_clock / 2");
    if (smear_halfwidth >= samples_per_clock / 2 + (samples_per_clock % 2))
        throw config_error("smear_halfwidth must stay inside one clock cycle");
    if (!std::isfinite(leakage_scale) || !std::isfinite(baseline_amplitude) ||
        !std::isfinite(diffusion_scale))
        throw config_error("leakage_scale, baseline_amplitude and diffusion_scale must be finite");
}

void to_json(nlohmann::json &j, const SimConfig &cfg) {
    j = nlohmann::json{
        {"num_encryptions", cfg.num_encryptions},
        {"samples_per_clock", cfg.samples_per_clock},
        {"sbox_count", cfg.sbox_count},
        {"leakage_kind", std::string(to_string(cfg.leakage_kind))},
        {"nnf_coefficients", cfg.nnf_model.alpha},
        {"leakage_scale", cfg.leakage_scale},
        {"noise_sigma", cfg.noise_sigma},
        {"jitter_max", cfg.jitter_max},
        {"baseline_amplitude", cfg.baseline_amplitude},
        {"smear_halfwidth", cfg.smear_halfwidth},
        {"diffusion_scale", cfg.diffusion_scale},
        {"iv", cfg.init.iv},
        {"round_constant", cfg.init.round_constant},
        {"rng_seed", cfg.rng_seed},
    };
}

void from_json(const nlohmann::json &j, SimConfig &cfg) {
    SimConfig d;
    cfg.num_encryptions = j.value("num_encryptions", d.num_encryptions);
    cfg.samples_per_clock = j.value("samples_per_clock", d.samples_per_clock);
    cfg.sbox_count = j.value("sbox_count", d.sbox_count);
    cfg.leakage_kind =
        leakage_kind_from_string(j.value("leakage_kind", std::string(to_string(d.leakage_kind))));
    if (j.contains("nnf_coefficients"))
        cfg.nnf_model.alpha = j.at("nnf_coefficients").get<std::array<double, nnf::kMonomials>>();
    cfg.leakage_scale = j.value("leakage_scale", d.leakage_scale);
    cfg.noise_sigma = j.value("noise_sigma", d.noise_sigma);
    cfg.jitter_max = j.value("jitter_max", d.jitter_max);
    cfg.baseline_amplitude = j.value("baseline_amplitude", d.baseline_amplitude);
    cfg.smear_halfwidth = j.value("smear_halfwidth", d.smear_halfwidth);
    cfg.diffusion_scale = j.value("diffusion_scale", d.diffusion_scale);
    cfg.init.iv = j.value("iv", d.init.iv);
    cfg.init.round_constant = j.value("round_constant", d.init.round_constant);
    cfg.rng_seed = j.value("rng_seed", d.rng_seed);
}

double leakage_value(const SimConfig &cfg, unsigned x) {
    switch (cfg.leakage_kind) {
    case LeakageKind::HammingWeight:
        return double(std::popcount(x));
    case LeakageKind::Msb:
        return double((x >> 4) & 1U);
    case LeakageKind::GenericNnf:
        return cfg.nnf_model.evaluate(x);
    }
    return 0.0;
}

double leakage_stddev_uniform(const SimConfig &cfg) {
    double sum = 0.0, sum2 = 0.0;
    for (unsigned x = 0; x < 32; ++x) {
        const double v = leakage_value(cfg, x);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / 32.0;
    return std::sqrt(std::max(0.0, sum2 / 32.0 - mean * mean));
}

std::mt19937_64 trace_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                      std::uint32_t(index >> 32), std::uint32_t{0x53435452}};
    return std::mt19937_64(seq);
}

ascon::Block128 random_block(std::mt19937_64 &rng) {
    ascon::Block128 b;
    b.w0 = rng();
    b.w1 = rng();
    return b;
}

std::vector<double> clean_trace(const ascon::Block128 &key, const ascon::Block128 &nonce,
                                const SimConfig &cfg) {
    const std::size_t spc = cfg.samples_per_clock;
    std::vector<double> out(cfg.trace_length());

    std::vector<double> bump(spc);
    for (std::size_t s = 0; s < spc; ++s)
        bump[s] = cfg.baseline_amplitude * 0.5 *
                  (1.0 - std::cos(2.0 * std::numbers::pi * double(s) / double(spc)));

    ascon::StateWords diffused{};
    if (cfg.diffusion_scale != 0.0) {
        ascon::AsconInitState st{cfg.init.iv, key, nonce};
        auto w = st.words();
        if (cfg.init.round_constant)
            w[2] ^= ascon::kFirstRoundConstant;
        diffused = ascon::linear_diffusion(ascon::substitution_layer(w));
    }

    const std::size_t w = cfg.smear_halfwidth;
    for (std::size_t col = 0; col < cfg.sbox_count; ++col) {
        const std::size_t base = col * spc;
        std::copy(bump.begin(), bump.end(), out.begin() + std::ptrdiff_t(base));

        const unsigned c = unsigned(col);
        const unsigned x = ascon::column_sensitive(cfg.init, c, ascon::column_bits(key, c),
                                                   ascon::column_bits(nonce, c));
        const double leak = cfg.leakage_scale * leakage_value(cfg, x);
        const std::size_t poi = base + cfg.poi_offset();
        for (std::size_t d = 0; d <= w; ++d) {
            const double weight = 1.0 - double(d) / double(w + 1);
            out[poi + d] += weight * leak;
            if (d > 0)
                out[poi - d] += weight * leak;
        }

        if (cfg.diffusion_scale != 0.0) {
            unsigned hw = 0;
            for (auto word : diffused)
                hw += unsigned((word >> col) & 1U);
            out[base + spc / 4] += cfg.diffusion_scale * double(hw);
        }
    }
    return out;
}

Trace synth_trace(const ascon::Block128 &key, const ascon::Block128 &nonce,
                  const SimConfig &cfg, std::mt19937_64 &rng) {
    cfg.validate();
    const std::vector<double> clean = clean_trace(key, nonce, cfg);
    const std::ptrdiff_t n = std::ptrdiff_t(clean.size());

    std::ptrdiff_t shift = 0;
    if (cfg.jitter_max > 0) {
        std::uniform_int_distribution<std::ptrdiff_t> jitter(-std::ptrdiff_t(cfg.jitter_max),
                                                            std::ptrdiff_t(cfg.jitter_max));
        shift = jitter(rng);
    }
    std::normal_distribution<double> noise(0.0, 1.0);

    Trace t;
    t.nonce = nonce;
    t.samples.resize(clean.size());
    for (std::ptrdiff_t s = 0; s < n; ++s) {
        const std::ptrdiff_t src = std::clamp<std::ptrdiff_t>(s - shift, 0, n - 1);
        double v = clean[std::size_t(src)];
        if (cfg.noise_sigma > 0.0)
            v += cfg.noise_sigma * noise(rng);
        t.samples[std::size_t(s)] = float(v);
    }
    return t;
}

TraceSet simulate_campaign(const SimConfig &cfg, const ascon::Block128 &key, unsigned threads) {
    cfg.validate();
    TraceSet ts;
    ts.ground_truth_key = key;
    nlohmann::json sim;
    to_json(sim, cfg);
    ts.metadata["simulation"] = sim;
    ts.traces.resize(cfg.num_encryptions);
    parallel_for(cfg.num_encryptions, threads, [&](std::size_t i) {
        auto rng = trace_stream(cfg.rng_seed, i);
        const ascon::Block128 nonce = random_block(rng);
        ts.traces[i] = synth_trace(key, nonce, cfg, rng);
        ts.traces[i].encryption_index = i;
    });
    return ts;
}

} // namespace sca::sim
