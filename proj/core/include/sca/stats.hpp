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

#include "sca/pair_dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sca::stats {

/// Leakage models assumed by the classical attacks.
enum class ClassicalLeakage { HammingWeight, Msb };

std::string_view to_string(ClassicalLeakage model);
ClassicalLeakage classical_leakage_from_string(std::string_view name);

double classical_leakage(ClassicalLeakage model, unsigned x);
std::vector<double> leakage_series(ClassicalLeakage model, std::span<const std::uint8_t> x);

/// Per-sample detail of a rank statistic; `statistic` is max |detail|.
/// A degenerate curve (an empty cluster) carries statistic 0 and is ranked
/// after every non-degenerate candidate.
struct RankCurve {
    double statistic = 0.0;
    Eigen::VectorXd detail;
    std::size_t argmax = 0;
    bool degenerate = false;
};

// The `traces` matrices below hold one observation per row and one sample
// per column. `leakage` holds L(X*) for each row.

/// Difference of means between {L >= mean(L)} and {L < mean(L)}.
RankCurve dpa_curve(const Eigen::MatrixXd &traces, std::span<const double> leakage);

/// |Pearson correlation| between each sample column and the leakage. Samples
/// with zero variance (or a constant leakage) contribute 0.
RankCurve cpa_curve(const Eigen::MatrixXd &traces, std::span<const double> leakage);

/// Kolmogorov-Smirnov statistic over the two mean-threshold clusters:
/// sum_c p_c * sup_t |F(t) - F(t | c)| with the pooled empirical CDF as F,
/// maximized over sample columns. Column orderings are computed once and
/// shared across candidates.
class KsRanker {
  public:
    explicit KsRanker(const Eigen::MatrixXd &traces);
    RankCurve curve(std::span<const double> leakage) const;

  private:
    const Eigen::MatrixXd *traces_;
    std::vector<std::vector<std::uint32_t>> order_; // per column, rows sorted by value
};

RankCurve ks_curve(const Eigen::MatrixXd &traces, std::span<const double> leakage);

/// Sample correlation. Throws Config on size mismatch / n < 2 and Numerical
/// on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Per-sample unbiased mean and variance across rows.
struct Moments {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
};
Moments moments(const Eigen::MatrixXd &traces);

/// W_L * sigma_i^2 / omega_0 over the window [i - W_L/2, i + W_L/2), where
/// omega_0 = (1/W_L) sum_jk C_jk of the unbiased window covariance.
/// Throws Config for an invalid window and Numerical when omega_0 <= 0.
double ndf_estimate(const Eigen::MatrixXd &traces, std::size_t sample_index, std::size_t window);

/// ndf_estimate at every sample whose window fits, one column per window
/// length (NaN elsewhere). Lagged products are accumulated once over fixed
/// row chunks, so the result does not depend on `threads`. Throws Numerical
/// at the first window with omega_0 <= 0.
Eigen::MatrixXd ndf_profile(const Eigen::MatrixXd &traces, const std::vector<std::size_t> &windows,
                            unsigned threads = 1);

enum class Attack { Dpa, Cpa, Ks };
std::string_view to_string(Attack a);

/// Candidate indices sorted by descending statistic; degenerate candidates
/// last; ties broken by the lower candidate index.
std::vector<unsigned> order_candidates(std::span<const double> statistic,
                                       std::span<const bool> degenerate);

struct ClassicalRanking {
    std::vector<RankCurve> curves; ///< indexed by candidate
    std::vector<unsigned> order;
};

/// Runs a classical attack for all 16 candidates over a pooled pair dataset.
ClassicalRanking rank_candidates(Attack attack, const PairDataset &ds, ClassicalLeakage model,
                                 unsigned threads = 1);

} // namespace sca::stats
