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
#include "sca/pair_dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sca::leak {

inline constexpr unsigned kDefaultOrder = 2;
/// Relative singular-value cutoff of the minimum-norm fit.
inline constexpr double kSvdCutoff = 1e-10;

struct LeakageModel {
    nnf::Coefficients coeffs;
    unsigned order_limit = nnf::kFullOrder;

    double evaluate(unsigned x) const { return coeffs.evaluate(x, order_limit); }
    /// Zeroes every coefficient of degree > m0.
    LeakageModel truncated(unsigned m0) const;
};

/// Minimum-norm least squares over the full 32-monomial basis. Duplicate
/// inputs are aggregated into weighted rows first.
LeakageModel fit_leakage(std::span<const double> labels, std::span<const std::uint8_t> x);

/// Evaluates `model` with coefficients of degree > m0 dropped.
double low_order_leakage(const LeakageModel &model, unsigned x, unsigned m0);

/// Root-mean-square of labels minus model evaluations.
double fit_residual(const LeakageModel &model, std::span<const double> labels,
                    std::span<const std::uint8_t> x);

struct Recluster {
    double rank = 0.0;
    Eigen::VectorXd detail; ///< |mean(C0*) - mean(C1*)| per dimension
    std::size_t argmax = 0;
    bool degenerate = false;
};

/// C0* = {l* > mean(l*)}, C1* = the rest; rank = max_d |mean(C0*) - mean(C1*)|
/// over the raw features (one trace per row). Constant l* is degenerate with
/// rank 0.
Recluster recluster_and_rank(const Eigen::MatrixXd &features, std::span<const double> lstar);

struct RankRow {
    unsigned candidate = 0;
    double rank = 0.0;
    std::size_t argmax = 0;
    bool degenerate = false;
    LeakageModel model; ///< full-order fit
    Eigen::VectorXd detail;
};

struct RankTable {
    std::vector<RankRow> rows; ///< best first

    /// 0-based position of a candidate in the ordering.
    std::size_t position(unsigned candidate) const;
    const RankRow &row(unsigned candidate) const;
};

/// For every candidate: X* from the public inputs, fit, truncate at m0,
/// recluster, rank. Sorted by descending rank with degenerate candidates last
/// and the lower candidate winning ties.
RankTable enumerate_candidates(const Eigen::MatrixXd &features,
                               std::span<const PairObservation> rows,
                               const ascon::InitConfig &init, std::span<const double> labels,
                               unsigned m0 = kDefaultOrder, unsigned threads = 1);

/// position, candidate, rank, argmax, degenerate
std::string rank_table_tsv(const RankTable &table);

} // namespace sca::leak
