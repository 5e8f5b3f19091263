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
#include "sca/trace.hpp"
#include "sca/trace_prep.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace sca {

/// Number of key candidates for a pair of S-boxes: (k_a, k_{a+64}, k_b, k_{b+64}).
inline constexpr unsigned kPairCandidates = 16;
inline constexpr unsigned kPairCount = ascon::kSboxColumns / 2;

/// Public inputs behind one row of a pooled pair dataset.
struct PairObservation {
    unsigned member = 0; ///< 0 for S-box 2p, 1 for S-box 2p+1
    unsigned column = 0;
    ascon::BitPair nonce;
    std::size_t trace_index = 0;
};

/// Windows of S-boxes 2p and 2p+1 stacked into one set of 2N rows: the
/// first N rows belong to S-box 2p, the next N to S-box 2p+1.
struct PairDataset {
    unsigned pair_index = 0;
    ascon::InitConfig init;
    Eigen::MatrixXd windows; ///< 2N x l, raw samples
    std::vector<PairObservation> rows;

    std::size_t size() const { return rows.size(); }

    /// X* for every row under a 4-bit candidate.
    std::vector<std::uint8_t> hypothesis(unsigned candidate) const;
};

/// Key bits (k_a, k_{a+64}) of S-box a and (k_b, k_{b+64}) of S-box b packed
/// MSB-first into a 4-bit candidate.
/// X* for every observation under a 4-bit candidate.
std::vector<std::uint8_t> pair_hypothesis(std::span<const PairObservation> rows,
                                          const ascon::InitConfig &init, unsigned candidate);

unsigned pair_candidate(const ascon::Block128 &key, unsigned pair_index);
ascon::BitPair candidate_key_bits(unsigned candidate, unsigned member);

PairDataset build_pair_dataset(const TraceSet &ts, unsigned pair_index,
                               const prep::WindowSpec &spec, const ascon::InitConfig &init);

} // namespace sca
