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
#include "sca/autoencoder.hpp"
#include "sca/leakage_est.hpp"
#include "sca/rl_cluster.hpp"
#include "sca/stats.hpp"
#include "sca/trace.hpp"
#include "sca/trace_prep.hpp"
#include "sca/trace_sim.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sca::pipeline {

enum class AttackKind { Dpa, Cpa, Ks, Scarl };

std::string_view to_string(AttackKind k);
AttackKind attack_kind_from_string(std::string_view name);

/// Everything an attack, sweep or NDF run needs. Loaded from the "attack"
/// section of a JSON config; command-line flags override individual fields.
struct AttackConfig {
    std::filesystem::path traceset;
    unsigned pair = 0;
    prep::WindowSpec window;
    ae::AutoencoderConfig autoencoder;
    rl::RlConfig rl;
    unsigned order_limit = leak::kDefaultOrder;
    stats::ClassicalLeakage model = stats::ClassicalLeakage::HammingWeight;
    ascon::InitConfig init;
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 1;
    std::optional<std::size_t> traces; ///< use only the first n traces
    unsigned threads = 1;
    std::vector<std::size_t> sweep_counts;
    std::vector<std::size_t> ndf_windows = {45, 50, 55};

    void validate() const;
};

void to_json(nlohmann::json &j, const AttackConfig &c);
void from_json(const nlohmann::json &j, AttackConfig &c);

/// The "simulation" section: a SimConfig plus the planted key, given either
/// as 32 hex digits ("key") or derived from the seed.
struct SimulateConfig {
    sim::SimConfig sim;
    std::optional<ascon::Block128> key;
    std::filesystem::path out = "traces.sctr";
    unsigned threads = 1;
};

void to_json(nlohmann::json &j, const SimulateConfig &c);
void from_json(const nlohmann::json &j, SimulateConfig &c);

std::string key_to_hex(const ascon::Block128 &key);
ascon::Block128 key_from_hex(std::string_view hex);
/// Planted key used when none is configured.
ascon::Block128 derived_key(std::uint64_t seed);

/// Independent sub-seed for one pipeline stage.
std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage);

struct CandidateScore {
    unsigned candidate = 0;
    double score = 0.0;
    std::size_t argmax = 0;
    bool degenerate = false;
};

struct AttackResult {
    AttackKind kind = AttackKind::Dpa;
    unsigned pair = 0;
    std::size_t trace_count = 0;
    std::vector<CandidateScore> ranking; ///< best first
    std::optional<unsigned> correct_candidate;

    // scarl only
    std::vector<double> ae_history;
    std::vector<rl::StepRecord> rl_history;
    std::size_t rl_best_step = 0;
    std::size_t rl_argmax = 0;
    Eigen::MatrixXd features;

    std::optional<std::size_t> correct_position() const;
    /// Present only when the ground-truth key is known.
    std::optional<bool> verdict() const;
};

using Progress = std::function<void(const std::string &)>;

/// Runs one attack over `ts` in memory.
AttackResult run_attack(AttackKind kind, const TraceSet &ts, const AttackConfig &cfg,
                        const Progress &progress = {});

nlohmann::json report_json(const AttackResult &r, const AttackConfig &cfg);

// Command implementations. Each writes its artifacts below cfg.out_dir (or
// cfg.out for simulate) and returns the summary that was written.

nlohmann::json cmd_simulate(const SimulateConfig &cfg);
nlohmann::json cmd_attack(AttackKind kind, const AttackConfig &cfg, const Progress &progress = {});
nlohmann::json cmd_sweep(AttackKind kind, const AttackConfig &cfg, const Progress &progress = {});
nlohmann::json cmd_ndf(const AttackConfig &cfg);
/// Human-readable summary of a report directory.
std::string cmd_report(const std::filesystem::path &dir);

/// Per-sample NDF curves, one column per window length (NaN where the window
/// leaves the trace). Rows are samples.
Eigen::MatrixXd ndf_curves(const Eigen::MatrixXd &traces, const std::vector<std::size_t> &windows,
                           unsigned threads = 1);

/// Traces as a dense matrix (one per row).
Eigen::MatrixXd trace_matrix(const TraceSet &ts);

} // namespace sca::pipeline
