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

#include "sca/leakage_est.hpp"

#include "sca/error.hpp"
#include "sca/parallel.hpp"
#include "sca/stats.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace sca::leak {

LeakageModel LeakageModel::truncated(unsigned m0) const {
    return {coeffs.truncated(m0), std::min(order_limit, m0)};
}

LeakageModel fit_leakage(std::span<const double> labels, std::span<const std::uint8_t> x) {
    if (labels.size() != x.size())
        throw config_error("fit_leakage: label and input counts differ");
    if (labels.empty())
        throw config_error("fit_leakage: no samples");
    std::array<double, nnf::kMonomials> sum{};
    std::array<std::size_t, nnf::kMonomials> count{};
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] >= nnf::kMonomials)
            throw config_error("fit_leakage: input value out of range");
        if (!std::isfinite(labels[j]))
            throw numerical_error("fit_leakage: non-finite label");
        sum[x[j]] += labels[j];
        ++count[x[j]];
    }
    // one row per distinct input, weighted by sqrt(multiplicity)
    std::vector<unsigned> present;
    for (unsigned v = 0; v < nnf::kMonomials; ++v)
        if (count[v])
            present.push_back(v);
    Eigen::MatrixXd a(Eigen::Index(present.size()), Eigen::Index(nnf::kMonomials));
    Eigen::VectorXd b(Eigen::Index(present.size()));
    for (std::size_t r = 0; r < present.size(); ++r) {
        const unsigned v = present[r];
        const double w = std::sqrt(double(count[v]));
        const auto m = nnf::monomial_vector(v);
        for (std::size_t k = 0; k < m.size(); ++k)
            a(Eigen::Index(r), Eigen::Index(k)) = w * m[k];
        b[Eigen::Index(r)] = w * sum[v] / double(count[v]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kSvdCutoff);
    const Eigen::VectorXd alpha = svd.solve(b);
    LeakageModel model;
    for (unsigned k = 0; k < nnf::kMonomials; ++k)
        model.coeffs.alpha[k] = alpha[Eigen::Index(k)];
    return model;
}

double low_order_leakage(const LeakageModel &model, unsigned x, unsigned m0) {
    return model.coeffs.evaluate(x, std::min(m0, model.order_limit));
}

double fit_residual(const LeakageModel &model, std::span<const double> labels,
                    std::span<const std::uint8_t> x) {
    if (labels.size() != x.size() || labels.empty())
        throw config_error("fit_residual: label and input counts differ");
    double sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double r = labels[j] - model.evaluate(x[j]);
        sq += r * r;
    }
    return std::sqrt(sq / double(x.size()));
}

Recluster recluster_and_rank(const Eigen::MatrixXd &features, std::span<const double> lstar) {
    if (std::size_t(features.rows()) != lstar.size())
        throw config_error("recluster_and_rank: feature and label counts differ");
    Recluster out;
    const Eigen::Index d = features.cols();
    out.detail = Eigen::VectorXd::Zero(d);
    if (lstar.empty()) {
        out.degenerate = true;
        return out;
    }
    double mean = 0.0, scale = 0.0;
    for (double v : lstar) {
        mean += v;
        scale = std::max(scale, std::abs(v));
    }
    mean /= double(lstar.size());
    // values within rounding of the mean are not "above" it
    const double tol = 1e-9 * scale;
    Eigen::VectorXd sum0 = Eigen::VectorXd::Zero(d), sum1 = Eigen::VectorXd::Zero(d);
    std::size_t n0 = 0;
    for (std::size_t j = 0; j < lstar.size(); ++j) {
        if (lstar[j] > mean + tol) {
            sum0 += features.row(Eigen::Index(j)).transpose();
            ++n0;
        } else {
            sum1 += features.row(Eigen::Index(j)).transpose();
        }
    }
    const std::size_t n1 = lstar.size() - n0;
    if (n0 == 0 || n1 == 0) {
        out.degenerate = true;
        return out;
    }
    out.detail = (sum0 / double(n0) - sum1 / double(n1)).cwiseAbs();
    Eigen::Index arg = 0;
    out.rank = d ? out.detail.maxCoeff(&arg) : 0.0;
    out.argmax = std::size_t(arg);
    return out;
}

std::size_t RankTable::position(unsigned candidate) const {
    for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k].candidate == candidate)
            return k;
    throw config_error("rank table has no candidate " + std::to_string(candidate));
}

const RankRow &RankTable::row(unsigned candidate) const { return rows[position(candidate)]; }

RankTable enumerate_candidates(const Eigen::MatrixXd &features,
                               std::span<const PairObservation> rows,
                               const ascon::InitConfig &init, std::span<const double> labels,
                               unsigned m0, unsigned threads) {
    if (std::size_t(features.rows()) != rows.size() || labels.size() != rows.size())
        throw config_error("enumerate_candidates: features, inputs and labels are not aligned");
    std::vector<RankRow> by_candidate(kPairCandidates);
    parallel_for(kPairCandidates, threads, [&](std::size_t c) {
        const auto x = pair_hypothesis(rows, init, unsigned(c));
        RankRow &row = by_candidate[c];
        row.candidate = unsigned(c);
        row.model = fit_leakage(labels, x);
        std::vector<double> lstar(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            lstar[j] = low_order_leakage(row.model, x[j], m0);
        const Recluster rc = recluster_and_rank(features, lstar);
        row.rank = rc.rank;
        row.argmax = rc.argmax;
        row.degenerate = rc.degenerate;
        row.detail = rc.detail;
    });
    std::array<double, kPairCandidates> rank{};
    std::array<bool, kPairCandidates> degenerate{};
    for (unsigned c = 0; c < kPairCandidates; ++c) {
        rank[c] = by_candidate[c].rank;
        degenerate[c] = by_candidate[c].degenerate;
    }
    RankTable table;
    for (unsigned c : stats::order_candidates(rank, degenerate))
        table.rows.push_back(std::move(by_candidate[c]));
    return table;
}

std::string rank_table_tsv(const RankTable &table) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "position\tcandidate\trank\targmax\tdegenerate\n";
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto &r = table.rows[k];
        os << k << '\t' << r.candidate << '\t' << r.rank << '\t' << r.argmax << '\t'
           << int(r.degenerate) << '\n';
    }
    return os.str();
}

} // namespace sca::leak
