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

#include "sca/ascon.hpp"
#include "sca/nnf.hpp"
#include "sca/trace.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace sca::sim {

enum class LeakageKind { HammingWeight, Msb, GenericNnf };

std::string_view to_string(LeakageKind kind);
LeakageKind leakage_kind_from_string(std::string_view name);

/// Parameters of the synthetic power model.
///
/// Each clock cycle i processes S-box column i. The noiseless trace is a
/// raised-cosine bump of height `baseline_amplitude` per cycle; the center
/// sample of cycle i additionally carries `leakage_scale * L(X_i)`. With
/// `smear_halfwidth = w > 0` that leakage is spread over 2w+1 samples with
/// triangular weights 1 - |d|/(w+1). Every sample gets i.i.d. N(0, noise_sigma^2)
/// and the whole trace is shifted by a uniform integer offset in
/// [-jitter_max, jitter_max] with edge padding.
struct SimConfig {
    std::size_t num_encryptions = 0;
    std::size_t samples_per_clock = 125;
    std::size_t sbox_count = 64;
    LeakageKind leakage_kind = LeakageKind::HammingWeight;
    nnf::Coefficients nnf_model; ///< used with LeakageKind::GenericNnf
    double leakage_scale = 1.0;
    double noise_sigma = 0.0;
    std::size_t jitter_max = 0;
    double baseline_amplitude = 1.0;
    std::size_t smear_halfwidth = 0;
    /// Realism mode: when non-zero, sample spc/4 of cycle i also leaks
    /// diffusion_scale * HW(column i after p_S and p_L). Never used by attacks.
    double diffusion_scale = 0.0;
    ascon::InitConfig init;
    std::uint64_t rng_seed = 0;

    /// Throws sca::Error (Config) when an invariant is violated.
    void validate() const;

    std::size_t trace_length() const { return sbox_count * samples_per_clock; }
    std::size_t poi_offset() const { return samples_per_clock / 2; }
};

void to_json(nlohmann::json &j, const SimConfig &cfg);
void from_json(const nlohmann::json &j, SimConfig &cfg);

/// L(x) for the configured leakage kind, before scaling.
double leakage_value(const SimConfig &cfg, unsigned x);

/// Standard deviation of L(X) for X uniform over F_2^5.
double leakage_stddev_uniform(const SimConfig &cfg);

/// Per-trace generator. Streams are keyed by (seed, index) so that a campaign
/// can be produced in any order or in parallel with identical output.
std::mt19937_64 trace_stream(std::uint64_t seed, std::uint64_t index);

/// Noiseless, jitter-free trace for the given inputs.
std::vector<double> clean_trace(const ascon::Block128 &key, const ascon::Block128 &nonce,
                                const SimConfig &cfg);

Trace synth_trace(const ascon::Block128 &key, const ascon::Block128 &nonce,
                  const SimConfig &cfg, std::mt19937_64 &rng);

/// Draws `cfg.num_encryptions` uniform nonces and emits one trace for each.
TraceSet simulate_campaign(const SimConfig &cfg, const ascon::Block128 &key,
                           unsigned threads = 1);

/// Uniformly random 128-bit value from `rng`.
ascon::Block128 random_block(std::mt19937_64 &rng);

} // namespace sca::sim
