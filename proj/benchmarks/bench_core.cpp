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

#include "sca/ascon.hpp"
#include "sca/autoencoder.hpp"
#include "sca/leakage_est.hpp"
#include "sca/nn.hpp"
#include "sca/pair_dataset.hpp"
#include "sca/pipeline.hpp"
#include "sca/stats.hpp"
#include "sca/trace_sim.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace sca;

namespace {

const ascon::Block128 kKey{0x0123456789abcdefULL, 0xfedcba9876543210ULL};

sim::SimConfig campaign(std::size_t n) {
    sim::SimConfig c;
    c.num_encryptions = n;
    c.sbox_count = 8;
    c.noise_sigma = 1.118;
    c.smear_halfwidth = 20;
    c.rng_seed = 3;
    return c;
}

const PairDataset &pair_data() {
    static const PairDataset ds = [] {
        const TraceSet ts = sim::simulate_campaign(campaign(1024), kKey);
        return build_pair_dataset(ts, 1, {}, {});
    }();
    return ds;
}

} // namespace

static void BM_SubstitutionLayer(benchmark::State &state) {
    ascon::StateWords w{1, 2, 3, 4, 5};
    for (auto _ : state) {
        w = ascon::substitution_layer(w);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(BM_SubstitutionLayer);

static void BM_SynthTrace(benchmark::State &state) {
    const sim::SimConfig c = campaign(1);
    std::mt19937_64 rng(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(sim::synth_trace(kKey, sim::random_block(rng), c, rng));
}
BENCHMARK(BM_SynthTrace);

static void BM_RankCandidates(benchmark::State &state) {
    const auto attack = static_cast<stats::Attack>(state.range(0));
    const PairDataset &ds = pair_data();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            stats::rank_candidates(attack, ds, stats::ClassicalLeakage::HammingWeight));
    state.SetLabel(std::string(stats::to_string(attack)));
}
BENCHMARK(BM_RankCandidates)
    ->Arg(int(stats::Attack::Dpa))
    ->Arg(int(stats::Attack::Cpa))
    ->Arg(int(stats::Attack::Ks))
    ->Unit(benchmark::kMillisecond);

static void BM_NdfProfile(benchmark::State &state) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    Eigen::MatrixXd t(2000, 500);
    for (Eigen::Index k = 0; k < t.size(); ++k)
        t.data()[k] = g(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(stats::ndf_profile(t, {45, 50, 55}));
}
BENCHMARK(BM_NdfProfile)->Unit(benchmark::kMillisecond);

static void BM_LstmForwardBackward(benchmark::State &state) {
    const auto hidden = std::size_t(state.range(0));
    nn::Rng rng(4);
    nn::Lstm cell(10, hidden, rng);
    std::mt19937_64 g(5);
    std::normal_distribution<double> nd;
    std::vector<Eigen::MatrixXd> xs(30, Eigen::MatrixXd(10, 256));
    for (auto &x : xs)
        for (Eigen::Index k = 0; k < x.size(); ++k)
            x.data()[k] = nd(g);
    const nn::Lstm::State zero{Eigen::MatrixXd::Zero(Eigen::Index(hidden), 256),
                               Eigen::MatrixXd::Zero(Eigen::Index(hidden), 256)};
    const Eigen::MatrixXd dc = Eigen::MatrixXd::Ones(Eigen::Index(hidden), 256);
    for (auto _ : state) {
        cell.forward(xs, zero);
        benchmark::DoNotOptimize(cell.backward({}, {}, dc));
    }
}
BENCHMARK(BM_LstmForwardBackward)->Arg(32)->Arg(150)->Unit(benchmark::kMillisecond);

static void BM_AutoencoderEpoch(benchmark::State &state) {
    const PairDataset &ds = pair_data();
    const ae::WindowTensor data = ae::prepare_windows(ds.windows, 10, 5);
    ae::AutoencoderConfig cfg;
    cfg.feature_dim = 32;
    cfg.epochs = 1;
    for (auto _ : state) {
        ae::Autoencoder model(cfg, 1);
        benchmark::DoNotOptimize(ae::train_autoencoder(model, data, 2));
    }
}
BENCHMARK(BM_AutoencoderEpoch)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_EnumerateCandidates(benchmark::State &state) {
    const PairDataset &ds = pair_data();
    std::mt19937_64 g(6);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd f(Eigen::Index(ds.size()), 150);
    for (Eigen::Index k = 0; k < f.size(); ++k)
        f.data()[k] = nd(g);
    std::vector<double> labels(ds.size());
    std::uniform_real_distribution<double> u;
    for (double &l : labels)
        l = u(g);
    for (auto _ : state)
        benchmark::DoNotOptimize(leak::enumerate_candidates(f, ds.rows, {}, labels, 2));
}
BENCHMARK(BM_EnumerateCandidates)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
