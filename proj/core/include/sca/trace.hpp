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

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace sca {

/// One power measurement of the first Initialization round.
struct Trace {
    std::vector<float> samples;
    ascon::Block128 nonce;
    std::uint64_t encryption_index = 0;

    friend bool operator==(const Trace &, const Trace &) = default;
};

/// A campaign of traces sharing one length. `metadata` carries the
/// generating configuration (or capture notes) as structured text.
struct TraceSet {
    std::vector<Trace> traces;
    std::optional<ascon::Block128> ground_truth_key;
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t size() const { return traces.size(); }
    bool empty() const { return traces.empty(); }
    std::size_t samples_per_trace() const {
        return traces.empty() ? std::size_t{0} : traces.front().samples.size();
    }

    /// The first `n` traces with the same metadata.
    TraceSet prefix(std::size_t n) const;

    friend bool operator==(const TraceSet &, const TraceSet &) = default;
};

} // namespace sca
