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

#include "sca/pair_dataset.hpp"

#include "sca/error.hpp"

#include <string>

namespace sca {

unsigned pair_candidate(const ascon::Block128 &key, unsigned pair_index) {
    const unsigned a = 2 * pair_index;
    return (ascon::column_bits(key, a).packed() << 2) | ascon::column_bits(key, a + 1).packed();
}

ascon::BitPair candidate_key_bits(unsigned candidate, unsigned member) {
    return ascon::BitPair::from_packed(member == 0 ? (candidate >> 2) & 3U : candidate & 3U);
}

std::vector<std::uint8_t> PairDataset::hypothesis(unsigned candidate) const {
    return pair_hypothesis(rows, init, candidate);
}

std::vector<std::uint8_t> pair_hypothesis(std::span<const PairObservation> rows,
                                          const ascon::InitConfig &init, unsigned candidate) {
    if (candidate >= kPairCandidates)
        throw config_error("candidate " + std::to_string(candidate) + " must be < 16");
    const ascon::BitPair ka = candidate_key_bits(candidate, 0);
    const ascon::BitPair kb = candidate_key_bits(candidate, 1);
    std::vector<std::uint8_t> x(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const PairObservation &o = rows[j];
        x[j] = ascon::column_sensitive(init, o.column, o.member == 0 ? ka : kb, o.nonce);
    }
    return x;
}

PairDataset build_pair_dataset(const TraceSet &ts, unsigned pair_index,
                               const prep::WindowSpec &spec, const ascon::InitConfig &init) {
    if (pair_index >= kPairCount)
        throw config_error("pair index " + std::to_string(pair_index) + " must be < 32");
    const std::size_t n = ts.size();
    const std::size_t len = ts.samples_per_trace();
    if (spec.samples_per_clock == 0 || (n > 0 && len % spec.samples_per_clock != 0))
        throw data_error("trace length " + std::to_string(len) +
                         " is not a whole number of clock cycles");
    const std::size_t sbox_count = n > 0 ? len / spec.samples_per_clock : ascon::kSboxColumns;
    if (2 * pair_index + 1 >= sbox_count && n > 0)
        throw data_error("traces cover " + std::to_string(sbox_count) +
                         " S-boxes; pair " + std::to_string(pair_index) + " is not present");

    PairDataset ds;
    ds.pair_index = pair_index;
    ds.init = init;
    ds.windows.resize(Eigen::Index(2 * n), Eigen::Index(spec.length()));
    ds.rows.resize(2 * n);
    for (unsigned member = 0; member < 2; ++member) {
        const unsigned column = 2 * pair_index + member;
        for (std::size_t j = 0; j < n; ++j) {
            const Trace &t = ts.traces[j];
            if (t.samples.size() != len)
                throw data_error("trace " + std::to_string(j) + " has a different length");
            const auto w = prep::extract_sbox_window(t.samples, column, sbox_count, spec);
            const std::size_t row = member * n + j;
            for (std::size_t k = 0; k < w.size(); ++k)
                ds.windows(Eigen::Index(row), Eigen::Index(k)) = double(w[k]);
            ds.rows[row] = {member, column, ascon::column_bits(t.nonce, column), j};
        }
    }
    return ds;
}

} // namespace sca
