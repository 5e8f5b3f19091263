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

#include "sca/pipeline.hpp"

#include "sca/container.hpp"
#include "sca/error.hpp"
#include "sca/pair_dataset.hpp"
#include "sca/parallel.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace sca::pipeline {

std::string_view to_string(AttackKind k) {
    switch (k) {
    case AttackKind::Dpa:
        return "dpa";
    case AttackKind::Cpa:
        return "cpa";
    case AttackKind::Ks:
        return "ks";
    case AttackKind::Scarl:
        return "scarl";
    }
    return "?";
}

AttackKind attack_kind_from_string(std::string_view name) {
    if (name == "dpa")
        return AttackKind::Dpa;
    if (name == "cpa")
        return AttackKind::Cpa;
    if (name == "ks")
        return AttackKind::Ks;
    if (name == "scarl")
        return AttackKind::Scarl;
    throw config_error("unknown attack kind '" + std::string(name) +
                       "' (expected dpa, cpa, ks or scarl)");
}

// ---------------------------------------------------------------- config

void AttackConfig::validate() const {
    if (pair >= kPairCount)
        throw config_error("pair index " + std::to_string(pair) + " must be < 32");
    if (window.samples_per_clock < 1)
        throw config_error("window.samples_per_clock must be >= 1");
    if (order_limit > nnf::kFullOrder)
        throw config_error("order_limit must be <= 5");
    if (traces && *traces < 2)
        throw config_error("at least two traces are required");
    autoencoder.validate();
    rl.validate();
    for (std::size_t w : ndf_windows)
        if (w < 2)
            throw config_error("NDF window lengths must be >= 2");
}

void to_json(nlohmann::json &j, const AttackConfig &c) {
    j = {{"traceset", c.traceset.string()},
         {"pair", c.pair},
         {"samples_per_clock", c.window.samples_per_clock},
         {"delta_l", c.window.delta_l},
         {"autoencoder", c.autoencoder},
         {"rl", c.rl},
         {"order_limit", c.order_limit},
         {"model", std::string(stats::to_string(c.model))},
         {"iv", c.init.iv},
         {"round_constant", c.init.round_constant},
         {"out_dir", c.out_dir.string()},
         {"seed", c.seed},
         {"threads", c.threads},
         {"sweep_counts", c.sweep_counts},
         {"ndf_windows", c.ndf_windows}};
    j["traces"] = c.traces ? nlohmann::json(*c.traces) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json &j, AttackConfig &c) {
    AttackConfig d;
    c.traceset = j.value("traceset", d.traceset.string());
    c.pair = j.value("pair", d.pair);
    c.window.samples_per_clock = j.value("samples_per_clock", d.window.samples_per_clock);
    c.window.delta_l = j.value("delta_l", d.window.delta_l);
    c.autoencoder = j.value("autoencoder", d.autoencoder);
    c.rl = j.value("rl", d.rl);
    c.order_limit = j.value("order_limit", d.order_limit);
    c.model = stats::classical_leakage_from_string(
        j.value("model", std::string(stats::to_string(d.model))));
    c.init.iv = j.value("iv", d.init.iv);
    c.init.round_constant = j.value("round_constant", d.init.round_constant);
    c.out_dir = j.value("out_dir", d.out_dir.string());
    c.seed = j.value("seed", d.seed);
    c.threads = j.value("threads", d.threads);
    c.sweep_counts = j.value("sweep_counts", d.sweep_counts);
    c.ndf_windows = j.value("ndf_windows", d.ndf_windows);
    if (j.contains("traces") && !j.at("traces").is_null())
        c.traces = j.at("traces").get<std::size_t>();
}

std::string key_to_hex(const ascon::Block128 &key) {
    std::ostringstream os;
    os << std::hex << std::setfill('0') << std::setw(16) << key.w1 << std::setw(16) << key.w0;
    return os.str();
}

ascon::Block128 key_from_hex(std::string_view hex) {
    if (hex.size() != 32)
        throw config_error("key must be 32 hex digits");
    auto word = [&](std::string_view part) {
        std::uint64_t v = 0;
        for (char ch : part) {
            unsigned d;
            if (ch >= '0' && ch <= '9')
                d = unsigned(ch - '0');
            else if (ch >= 'a' && ch <= 'f')
                d = unsigned(ch - 'a' + 10);
            else if (ch >= 'A' && ch <= 'F')
                d = unsigned(ch - 'A' + 10);
            else
                throw config_error("key contains a non-hex character");
            v = (v << 4) | d;
        }
        return v;
    };
    return {word(hex.substr(16)), word(hex.substr(0, 16))};
}

ascon::Block128 derived_key(std::uint64_t seed) {
    auto rng = sim::trace_stream(seed, std::numeric_limits<std::uint64_t>::max());
    return sim::random_block(rng);
}

void to_json(nlohmann::json &j, const SimulateConfig &c) {
    j = c.sim;
    if (c.key)
        j["key"] = key_to_hex(*c.key);
    j["out"] = c.out.string();
    j["threads"] = c.threads;
}

void from_json(const nlohmann::json &j, SimulateConfig &c) {
    c.sim = j.get<sim::SimConfig>();
    if (j.contains("key"))
        c.key = key_from_hex(j.at("key").get<std::string>());
    c.out = j.value("out", std::string("traces.sctr"));
    c.threads = j.value("threads", 1U);
}

std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage) {
    // splitmix64 finalizer over the combined value
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stage + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------- attacks

std::optional<std::size_t> AttackResult::correct_position() const {
    if (!correct_candidate)
        return std::nullopt;
    for (std::size_t k = 0; k < ranking.size(); ++k)
        if (ranking[k].candidate == *correct_candidate)
            return k;
    return std::nullopt;
}

std::optional<bool> AttackResult::verdict() const {
    const auto pos = correct_position();
    if (!pos)
        return std::nullopt;
    return *pos == 0;
}

namespace {

void note(const Progress &p, const std::string &msg) {
    if (p)
        p(msg);
}

stats::Attack classical(AttackKind k) {
    switch (k) {
    case AttackKind::Dpa:
        return stats::Attack::Dpa;
    case AttackKind::Cpa:
        return stats::Attack::Cpa;
    default:
        return stats::Attack::Ks;
    }
}

} // namespace

AttackResult run_attack(AttackKind kind, const TraceSet &full, const AttackConfig &cfg,
                        const Progress &progress) {
    cfg.validate();
    const TraceSet ts = cfg.traces ? full.prefix(*cfg.traces) : full;
    if (cfg.traces && ts.size() < *cfg.traces)
        throw config_error("requested " + std::to_string(*cfg.traces) + " traces but only " +
                           std::to_string(full.size()) + " are available");
    if (ts.size() < 2)
        throw data_error("at least two traces are required for an attack");

    AttackResult res;
    res.kind = kind;
    res.pair = cfg.pair;
    res.trace_count = ts.size();
    if (ts.ground_truth_key)
        res.correct_candidate = pair_candidate(*ts.ground_truth_key, cfg.pair);

    const PairDataset ds = build_pair_dataset(ts, cfg.pair, cfg.window, cfg.init);
    if (kind != AttackKind::Scarl) {
        const auto r = stats::rank_candidates(classical(kind), ds, cfg.model, cfg.threads);
        for (unsigned c : r.order)
            res.ranking.push_back(
                {c, r.curves[c].statistic, r.curves[c].argmax, r.curves[c].degenerate});
        return res;
    }

    const auto &ac = cfg.autoencoder;
    note(progress, "windowing " + std::to_string(ds.size()) + " S-box traces");
    const ae::WindowTensor data = ae::prepare_windows(ds.windows, ac.window, ac.stride);
    ae::Autoencoder model(ac, stage_seed(cfg.seed, 1));
    const auto hist = ae::train_autoencoder(
        model, data, stage_seed(cfg.seed, 2), [&](std::size_t epoch, double mse) {
            std::ostringstream os;
            os << "autoencoder epoch " << epoch + 1 << "/" << ac.epochs << " mse " << mse;
            note(progress, os.str());
        });
    res.ae_history = hist.epoch_mse;
    res.features = ae::encode(model, data, cfg.threads);

    note(progress, "clustering");
    const auto rl = rl::run_clustering(res.features, cfg.rl, stage_seed(cfg.seed, 3));
    res.rl_history = rl.history;
    res.rl_best_step = rl.best_step;
    res.rl_argmax = rl.best.argmax;

    const std::vector<double> labels(rl.labels.data(), rl.labels.data() + rl.labels.size());
    const auto table = leak::enumerate_candidates(res.features, ds.rows, cfg.init, labels,
                                                  cfg.order_limit, cfg.threads);
    for (const auto &row : table.rows)
        res.ranking.push_back({row.candidate, row.rank, row.argmax, row.degenerate});
    return res;
}

nlohmann::json report_json(const AttackResult &r, const AttackConfig &cfg) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(r.kind));
    j["pair"] = r.pair;
    j["trace_count"] = r.trace_count;
    j["config"] = cfg;
    nlohmann::json ranking = nlohmann::json::array();
    for (const auto &c : r.ranking)
        ranking.push_back({{"candidate", c.candidate},
                           {"score", c.score},
                           {"argmax", c.argmax},
                           {"degenerate", c.degenerate}});
    j["ranking"] = ranking;
    if (r.correct_candidate) {
        j["correct_candidate"] = *r.correct_candidate;
        j["correct_position"] = *r.correct_position();
        j["verdict"] = *r.verdict() ? "correct" : "incorrect";
    }
    if (r.kind == AttackKind::Scarl) {
        j["autoencoder_mse"] = r.ae_history;
        j["rl_best_step"] = r.rl_best_step;
        j["rl_argmax"] = r.rl_argmax;
    }
    return j;
}

// ---------------------------------------------------------------- files

namespace {

void write_text(const std::filesystem::path &path, const std::string &text) {
    io::write_file(path, {reinterpret_cast<const std::uint8_t *>(text.data()), text.size()});
}

void write_json(const std::filesystem::path &path, const nlohmann::json &j) {
    write_text(path, j.dump(2) + "\n");
}

void ensure_dir(const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw data_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string ranking_tsv(const AttackResult &r) {
    std::ostringstream os;
    os << std::setprecision(17) << "position\tcandidate\tscore\targmax\tdegenerate\n";
    for (std::size_t k = 0; k < r.ranking.size(); ++k) {
        const auto &c = r.ranking[k];
        os << k << '\t' << c.candidate << '\t' << c.score << '\t' << c.argmax << '\t'
           << int(c.degenerate) << '\n';
    }
    return os.str();
}

TraceSet load(const AttackConfig &cfg) {
    if (cfg.traceset.empty())
        throw config_error("no traceset configured");
    if (!std::filesystem::exists(cfg.traceset))
        throw data_error("traceset '" + cfg.traceset.string() + "' does not exist");
    return io::read_traceset(cfg.traceset);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

nlohmann::json cmd_simulate(const SimulateConfig &cfg) {
    cfg.sim.validate();
    const ascon::Block128 key = cfg.key ? *cfg.key : derived_key(cfg.sim.rng_seed);
    const TraceSet ts = sim::simulate_campaign(cfg.sim, key, cfg.threads);
    if (cfg.out.has_parent_path())
        ensure_dir(cfg.out.parent_path());
    io::write_traceset(ts, cfg.out);
    nlohmann::json j;
    j["traceset"] = cfg.out.string();
    j["traces"] = ts.size();
    j["samples_per_trace"] = ts.samples_per_trace();
    j["simulation"] = cfg.sim;
    return j;
}

nlohmann::json cmd_attack(AttackKind kind, const AttackConfig &cfg, const Progress &progress) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const TraceSet ts = load(cfg);
    const AttackResult r = run_attack(kind, ts, cfg, progress);
    ensure_dir(cfg.out_dir);
    const nlohmann::json report = report_json(r, cfg);
    write_json(cfg.out_dir / "report.json", report);
    write_text(cfg.out_dir / "ranking.tsv", ranking_tsv(r));
    if (kind == AttackKind::Scarl) {
        std::ostringstream ae;
        ae << std::setprecision(17) << "epoch\tmse\n";
        for (std::size_t e = 0; e < r.ae_history.size(); ++e)
            ae << e + 1 << '\t' << r.ae_history[e] << '\n';
        write_text(cfg.out_dir / "autoencoder_history.tsv", ae.str());
        write_text(cfg.out_dir / "rl_history.tsv", rl::history_tsv(r.rl_history));
        ae::write_features(cfg.out_dir / "features.scft", r.features);
    }
    write_json(cfg.out_dir / "timing.json", {{"seconds", seconds_since(t0)}});
    return report;
}

nlohmann::json cmd_sweep(AttackKind kind, const AttackConfig &cfg, const Progress &progress) {
    cfg.validate();
    if (cfg.sweep_counts.empty())
        throw config_error("sweep needs at least one trace count");
    const auto t0 = std::chrono::steady_clock::now();
    const TraceSet ts = load(cfg);
    for (std::size_t n : cfg.sweep_counts)
        if (n > ts.size() || n < 2)
            throw config_error("sweep count " + std::to_string(n) + " outside [2, " +
                               std::to_string(ts.size()) + "]");

    // sweep points run concurrently; each attack itself is single-threaded
    std::vector<AttackResult> results(cfg.sweep_counts.size());
    parallel_for(results.size(), cfg.threads, [&](std::size_t k) {
        AttackConfig sub = cfg;
        sub.traces = cfg.sweep_counts[k];
        sub.threads = 1;
        results[k] = run_attack(kind, ts, sub);
        note(progress, "sweep point " + std::to_string(cfg.sweep_counts[k]) + " done");
    });

    ensure_dir(cfg.out_dir);
    std::ostringstream curve;
    curve << std::setprecision(17) << "traces\ttop_candidate\ttop_score\tcorrect_position\n";
    nlohmann::json points = nlohmann::json::array();
    std::optional<std::size_t> last;
    bool nonincreasing = true;
    for (const auto &r : results) {
        const auto pos = r.correct_position();
        curve << r.trace_count << '\t' << r.ranking.front().candidate << '\t'
              << r.ranking.front().score << '\t';
        if (pos)
            curve << *pos;
        else
            curve << "NA";
        curve << '\n';
        nlohmann::json p = {{"traces", r.trace_count},
                            {"top_candidate", r.ranking.front().candidate},
                            {"top_score", r.ranking.front().score}};
        if (pos) {
            p["correct_position"] = *pos;
            if (last && *pos > *last)
                nonincreasing = false;
            last = pos;
        }
        points.push_back(p);
    }
    write_text(cfg.out_dir / "sweep.tsv", curve.str());
    nlohmann::json summary = {{"kind", std::string(to_string(kind))},
                              {"pair", cfg.pair},
                              {"config", cfg},
                              {"points", points}};
    if (last)
        summary["correct_position_nonincreasing"] = nonincreasing;
    write_json(cfg.out_dir / "sweep.json", summary);
    write_json(cfg.out_dir / "timing.json", {{"seconds", seconds_since(t0)}});
    return summary;
}

Eigen::MatrixXd trace_matrix(const TraceSet &ts) {
    const std::size_t len = ts.samples_per_trace();
    Eigen::MatrixXd m(Eigen::Index(ts.size()), Eigen::Index(len));
    for (std::size_t j = 0; j < ts.size(); ++j) {
        if (ts.traces[j].samples.size() != len)
            throw data_error("trace " + std::to_string(j) + " has a different length");
        for (std::size_t k = 0; k < len; ++k)
            m(Eigen::Index(j), Eigen::Index(k)) = ts.traces[j].samples[k];
    }
    return m;
}

Eigen::MatrixXd ndf_curves(const Eigen::MatrixXd &traces, const std::vector<std::size_t> &windows,
                           unsigned threads) {
    if (traces.rows() < 2)
        throw data_error("NDF analysis needs at least two traces");
    return stats::ndf_profile(traces, windows, threads);
}

nlohmann::json cmd_ndf(const AttackConfig &cfg) {
    cfg.validate();
    if (cfg.ndf_windows.empty())
        throw config_error("ndf needs at least one window length");
    const auto t0 = std::chrono::steady_clock::now();
    TraceSet ts = load(cfg);
    if (cfg.traces)
        ts = ts.prefix(*cfg.traces);
    const Eigen::MatrixXd curves = ndf_curves(trace_matrix(ts), cfg.ndf_windows, cfg.threads);
    ensure_dir(cfg.out_dir);
    std::ostringstream os;
    os << std::setprecision(17) << "sample";
    for (std::size_t w : cfg.ndf_windows)
        os << "\tndf_w" << w;
    os << '\n';
    for (Eigen::Index i = 0; i < curves.rows(); ++i) {
        os << i;
        for (Eigen::Index k = 0; k < curves.cols(); ++k) {
            if (std::isnan(curves(i, k)))
                os << "\tNA";
            else
                os << '\t' << curves(i, k);
        }
        os << '\n';
    }
    write_text(cfg.out_dir / "ndf.tsv", os.str());
    nlohmann::json summary = {{"traces", ts.size()}, {"config", cfg}};
    nlohmann::json per_window = nlohmann::json::array();
    for (Eigen::Index k = 0; k < curves.cols(); ++k) {
        double sum = 0.0;
        std::size_t n = 0;
        for (Eigen::Index i = 0; i < curves.rows(); ++i)
            if (!std::isnan(curves(i, k))) {
                sum += curves(i, k);
                ++n;
            }
        per_window.push_back({{"window", cfg.ndf_windows[std::size_t(k)]},
                              {"mean_ndf", n ? nlohmann::json(sum / double(n)) : nlohmann::json(nullptr)}});
    }
    summary["windows"] = per_window;
    write_json(cfg.out_dir / "ndf.json", summary);
    write_json(cfg.out_dir / "timing.json", {{"seconds", seconds_since(t0)}});
    return summary;
}

std::string cmd_report(const std::filesystem::path &dir) {
    const auto report_path = dir / "report.json";
    const auto sweep_path = dir / "sweep.json";
    const auto ndf_path = dir / "ndf.json";
    auto parse = [](const std::filesystem::path &p) {
        const auto raw = io::read_file(p);
        try {
            return nlohmann::json::parse(raw.begin(), raw.end());
        } catch (const nlohmann::json::exception &e) {
            throw data_error("malformed report '" + p.string() + "': " + e.what());
        }
    };
    std::ostringstream os;
    bool any = false;
    if (std::filesystem::exists(report_path)) {
        any = true;
        const auto j = parse(report_path);
        os << "attack " << j.value("kind", "?") << " on pair " << j.value("pair", 0) << " with "
           << j.value("trace_count", 0) << " traces\n";
        std::size_t k = 0;
        for (const auto &c : j.at("ranking")) {
            os << "  " << std::setw(2) << k++ << "  candidate " << std::setw(2)
               << c.at("candidate").get<unsigned>() << "  score " << c.at("score").get<double>()
               << (c.at("degenerate").get<bool>() ? "  (degenerate)" : "") << '\n';
        }
        if (j.contains("verdict"))
            os << "correct candidate " << j["correct_candidate"].get<unsigned>() << " at position "
               << j["correct_position"].get<std::size_t>() << ": " << j["verdict"].get<std::string>()
               << '\n';
    }
    if (std::filesystem::exists(sweep_path)) {
        any = true;
        const auto j = parse(sweep_path);
        os << "sweep " << j.value("kind", "?") << " on pair " << j.value("pair", 0) << '\n';
        for (const auto &p : j.at("points")) {
            os << "  " << std::setw(8) << p.at("traces").get<std::size_t>() << " traces  top "
               << p.at("top_candidate").get<unsigned>();
            if (p.contains("correct_position"))
                os << "  correct at " << p["correct_position"].get<std::size_t>();
            os << '\n';
        }
    }
    if (std::filesystem::exists(ndf_path)) {
        any = true;
        const auto j = parse(ndf_path);
        os << "ndf over " << j.value("traces", 0) << " traces\n";
        for (const auto &w : j.at("windows")) {
            os << "  W_L " << w.at("window").get<std::size_t>() << "  mean NDF ";
            if (w.at("mean_ndf").is_null())
                os << "NA";
            else
                os << w.at("mean_ndf").get<double>();
            os << '\n';
        }
    }
    if (!any)
        throw data_error("no report found in '" + dir.string() + "'");
    return os.str();
}

} // namespace sca::pipeline
