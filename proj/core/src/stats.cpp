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

#include "sca/stats.hpp"

#include "sca/error.hpp"
#include "sca/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <optional>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sca::stats {

std::string_view to_string(ClassicalLeakage model) {
    return model == ClassicalLeakage::HammingWeight ? "hw" : "msb";
}

ClassicalLeakage classical_leakage_from_string(std::string_view name) {
    if (name == "hw")
        return ClassicalLeakage::HammingWeight;
    if (name == "msb")
        return ClassicalLeakage::Msb;
    throw config_error("unknown leakage model '" + std::string(name) + "' (expected hw or msb)");
}

double classical_leakage(ClassicalLeakage model, unsigned x) {
    return model == ClassicalLeakage::HammingWeight ? double(std::popcount(x & 31U))
                                                    : double((x >> 4) & 1U);
}

std::vector<double> leakage_series(ClassicalLeakage model, std::span<const std::uint8_t> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(),
                   [model](std::uint8_t v) { return classical_leakage(model, v); });
    return out;
}

namespace {

void check_shapes(const Eigen::MatrixXd &traces, std::span<const double> leakage,
                  const char *who) {
    if (std::size_t(traces.rows()) != leakage.size())
        throw config_error(std::string(who) + ": " + std::to_string(traces.rows()) +
                           " traces but " + std::to_string(leakage.size()) + " leakage values");
    if (traces.rows() < 2)
        throw config_error(std::string(who) + ": at least two traces are required");
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

void finish(RankCurve &c) {
    Eigen::Index arg = 0;
    c.statistic = c.detail.size() ? c.detail.cwiseAbs().maxCoeff(&arg) : 0.0;
    c.argmax = std::size_t(arg);
}

// C1 = {L >= mean}, following the deterministic tie rule.
std::vector<char> upper_cluster(std::span<const double> leakage) {
    const double mu = mean_of(leakage);
    std::vector<char> in1(leakage.size());
    for (std::size_t j = 0; j < leakage.size(); ++j)
        in1[j] = leakage[j] >= mu;
    return in1;
}

} // namespace

RankCurve dpa_curve(const Eigen::MatrixXd &traces, std::span<const double> leakage) {
    check_shapes(traces, leakage, "dpa_rank");
    const auto in1 = upper_cluster(leakage);
    Eigen::VectorXd sum0 = Eigen::VectorXd::Zero(traces.cols());
    Eigen::VectorXd sum1 = Eigen::VectorXd::Zero(traces.cols());
    std::size_t n1 = 0;
    for (Eigen::Index j = 0; j < traces.rows(); ++j) {
        if (in1[std::size_t(j)]) {
            sum1 += traces.row(j).transpose();
            ++n1;
        } else {
            sum0 += traces.row(j).transpose();
        }
    }
    const std::size_t n0 = std::size_t(traces.rows()) - n1;
    RankCurve c;
    if (n0 == 0 || n1 == 0) {
        c.degenerate = true;
        c.detail = Eigen::VectorXd::Zero(traces.cols());
        return c;
    }
    c.detail = sum1 / double(n1) - sum0 / double(n0);
    finish(c);
    return c;
}

RankCurve cpa_curve(const Eigen::MatrixXd &traces, std::span<const double> leakage) {
    check_shapes(traces, leakage, "cpa_rank");
    const double mu = mean_of(leakage);
    Eigen::VectorXd l(traces.rows());
    for (Eigen::Index j = 0; j < l.size(); ++j)
        l[j] = leakage[std::size_t(j)] - mu;
    const double ll = l.squaredNorm();

    RankCurve c;
    c.detail = Eigen::VectorXd::Zero(traces.cols());
    if (ll > 0.0) {
        const Eigen::RowVectorXd col_mean = traces.colwise().mean();
        for (Eigen::Index s = 0; s < traces.cols(); ++s) {
            const Eigen::VectorXd t = traces.col(s).array() - col_mean[s];
            const double tt = t.squaredNorm();
            if (tt > 0.0)
                c.detail[s] = l.dot(t) / std::sqrt(ll * tt);
        }
    }
    finish(c);
    return c;
}

KsRanker::KsRanker(const Eigen::MatrixXd &traces) : traces_(&traces) {
    const std::size_t n = std::size_t(traces.rows());
    order_.resize(std::size_t(traces.cols()));
    for (Eigen::Index s = 0; s < traces.cols(); ++s) {
        auto &o = order_[std::size_t(s)];
        o.resize(n);
        std::iota(o.begin(), o.end(), 0U);
        std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) {
            return traces(a, s) < traces(b, s);
        });
    }
}

RankCurve KsRanker::curve(std::span<const double> leakage) const {
    const Eigen::MatrixXd &traces = *traces_;
    check_shapes(traces, leakage, "ks_rank");
    const auto in1 = upper_cluster(leakage);
    const std::size_t n = leakage.size();
    const std::size_t n1 = std::size_t(std::count(in1.begin(), in1.end(), char(1)));
    const std::size_t n0 = n - n1;
    RankCurve c;
    c.detail = Eigen::VectorXd::Zero(traces.cols());
    if (n0 == 0 || n1 == 0) {
        c.degenerate = true;
        return c;
    }
    const double p0 = double(n0) / double(n);
    const double p1 = double(n1) / double(n);
    for (Eigen::Index s = 0; s < traces.cols(); ++s) {
        const auto &o = order_[std::size_t(s)];
        std::size_t seen = 0, seen1 = 0;
        double sup0 = 0.0, sup1 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint32_t row = o[k];
            ++seen;
            if (in1[row])
                ++seen1;
            // evaluate the CDFs only after the last of a run of equal values
            if (k + 1 < n && traces(o[k + 1], s) == traces(row, s))
                continue;
            const double f = double(seen) / double(n);
            const double f1 = double(seen1) / double(n1);
            const double f0 = double(seen - seen1) / double(n0);
            sup1 = std::max(sup1, std::abs(f - f1));
            sup0 = std::max(sup0, std::abs(f - f0));
        }
        c.detail[s] = p0 * sup0 + p1 * sup1;
    }
    finish(c);
    return c;
}

RankCurve ks_curve(const Eigen::MatrixXd &traces, std::span<const double> leakage) {
    return KsRanker(traces).curve(leakage);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw config_error("pearson: length mismatch");
    if (x.size() < 2)
        throw config_error("pearson: at least two points are required");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw numerical_error("pearson: zero-variance input");
    return sxy / std::sqrt(sxx * syy);
}

Moments moments(const Eigen::MatrixXd &traces) {
    if (traces.rows() < 2)
        throw config_error("moments: at least two traces are required");
    // Welford, one pass over rows
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(traces.cols());
    Eigen::VectorXd m2 = Eigen::VectorXd::Zero(traces.cols());
    for (Eigen::Index j = 0; j < traces.rows(); ++j) {
        const Eigen::VectorXd x = traces.row(j).transpose();
        const Eigen::VectorXd delta = x - mean;
        mean += delta / double(j + 1);
        m2.array() += delta.array() * (x - mean).array();
    }
    return {mean, m2 / double(traces.rows() - 1)};
}

double ndf_estimate(const Eigen::MatrixXd &traces, std::size_t sample_index, std::size_t window) {
    if (window < 2)
        throw config_error("ndf_estimate: window must be >= 2");
    if (traces.rows() < 2)
        throw config_error("ndf_estimate: at least two traces are required");
    const std::size_t half = window / 2;
    if (sample_index < half || sample_index - half + window > std::size_t(traces.cols()))
        throw config_error("ndf_estimate: window around sample " + std::to_string(sample_index) +
                           " leaves the trace");
    const Eigen::Index first = Eigen::Index(sample_index - half);
    const Eigen::Index w = Eigen::Index(window);
    const Eigen::MatrixXd block = traces.middleCols(first, w);
    const Eigen::MatrixXd centered = block.rowwise() - block.colwise().mean();
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / double(traces.rows() - 1);
    const double omega0 = cov.sum() / double(window);
    if (!(omega0 > 0.0))
        throw numerical_error("ndf_estimate: non-positive DC spectral component at sample " +
                              std::to_string(sample_index));
    const double var_i = cov(Eigen::Index(half), Eigen::Index(half));
    return double(window) * var_i / omega0;
}

Eigen::MatrixXd ndf_profile(const Eigen::MatrixXd &traces, const std::vector<std::size_t> &windows,
                            unsigned threads) {
    if (traces.rows() < 2)
        throw config_error("ndf_profile: at least two traces are required");
    std::size_t max_w = 0;
    for (std::size_t w : windows) {
        if (w < 2)
            throw config_error("ndf_profile: window must be >= 2");
        max_w = std::max(max_w, w);
    }
    const Eigen::Index len = traces.cols();
    const Eigen::Index lags = Eigen::Index(std::min<std::size_t>(max_w, std::size_t(len)));
    Eigen::MatrixXd out = Eigen::MatrixXd::Constant(len, Eigen::Index(windows.size()),
                                                    std::numeric_limits<double>::quiet_NaN());
    if (windows.empty() || len == 0)
        return out;

    // prod(j, d) = sum_r x_rj x_r(j+d) over column-centered traces
    const Eigen::RowVectorXd mean = traces.colwise().mean();
    constexpr Eigen::Index kChunk = 256;
    const std::size_t chunks = std::size_t((traces.rows() + kChunk - 1) / kChunk);
    std::vector<Eigen::ArrayXXd> partial(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        const Eigen::Index r0 = Eigen::Index(c) * kChunk;
        const Eigen::Index rn = std::min(kChunk, traces.rows() - r0);
        const Eigen::ArrayXXd x =
            (traces.middleRows(r0, rn).rowwise() - mean).transpose().array(); // len x rn
        Eigen::ArrayXXd p = Eigen::ArrayXXd::Zero(len, lags);
        for (Eigen::Index d = 0; d < lags; ++d)
            p.col(d).head(len - d) =
                (x.topRows(len - d) * x.bottomRows(len - d)).rowwise().sum();
        partial[c] = std::move(p);
    });
    Eigen::ArrayXXd prod = std::move(partial[0]);
    for (std::size_t c = 1; c < chunks; ++c)
        prod += partial[c];
    prod /= double(traces.rows() - 1);

    for (std::size_t k = 0; k < windows.size(); ++k) {
        const Eigen::Index w = Eigen::Index(windows[k]);
        const Eigen::Index half = w / 2;
        for (Eigen::Index i = half; i - half + w <= len; ++i) {
            const Eigen::Index first = i - half;
            double total = 0.0;
            for (Eigen::Index j = first; j < first + w; ++j) {
                total += prod(j, 0);
                for (Eigen::Index d = 1; j + d < first + w; ++d)
                    total += 2.0 * prod(j, d);
            }
            const double omega0 = total / double(w);
            if (!(omega0 > 0.0))
                throw numerical_error("ndf_profile: non-positive DC spectral component at sample " +
                                      std::to_string(i));
            out(i, Eigen::Index(k)) = double(w) * prod(i, 0) / omega0;
        }
    }
    return out;
}

std::string_view to_string(Attack a) {
    switch (a) {
    case Attack::Dpa:
        return "dpa";
    case Attack::Cpa:
        return "cpa";
    case Attack::Ks:
        return "ks";
    }
    return "?";
}

std::vector<unsigned> order_candidates(std::span<const double> statistic,
                                       std::span<const bool> degenerate) {
    std::vector<unsigned> order(statistic.size());
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
        if (degenerate[a] != degenerate[b])
            return !degenerate[a];
        return statistic[a] > statistic[b];
    });
    return order;
}

ClassicalRanking rank_candidates(Attack attack, const PairDataset &ds, ClassicalLeakage model,
                                 unsigned threads) {
    ClassicalRanking out;
    out.curves.resize(kPairCandidates);
    std::optional<KsRanker> ks;
    if (attack == Attack::Ks)
        ks.emplace(ds.windows);
    parallel_for(kPairCandidates, threads, [&](std::size_t c) {
        const auto x = ds.hypothesis(unsigned(c));
        const auto l = leakage_series(model, x);
        switch (attack) {
        case Attack::Dpa:
            out.curves[c] = dpa_curve(ds.windows, l);
            break;
        case Attack::Cpa:
            out.curves[c] = cpa_curve(ds.windows, l);
            break;
        case Attack::Ks:
            out.curves[c] = ks->curve(l);
            break;
        }
    });
    std::array<double, kPairCandidates> stat{};
    std::array<bool, kPairCandidates> degen{};
    for (unsigned c = 0; c < kPairCandidates; ++c) {
        stat[c] = out.curves[c].statistic;
        degen[c] = out.curves[c].degenerate;
    }
    out.order = order_candidates(stat, degen);
    return out;
}

} // namespace sca::stats
