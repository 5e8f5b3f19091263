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

#include "sca/trace_prep.hpp"

#include "sca/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sca::prep {

std::ptrdiff_t WindowSpec::start(std::size_t sbox_index) const {
    // floor((2i + 1) * spc - l) / 2, exact in integers
    const std::ptrdiff_t twice = std::ptrdiff_t((2 * sbox_index + 1) * samples_per_clock) -
                                 std::ptrdiff_t(length());
    return twice >= 0 ? twice / 2 : -((-twice + 1) / 2);
}

std::vector<float> extract_sbox_window(std::span<const float> samples, std::size_t sbox_index,
                                       std::size_t sbox_count, const WindowSpec &spec) {
    if (sbox_index >= sbox_count)
        throw config_error("extract_sbox_window: S-box " + std::to_string(sbox_index) +
                           " out of range");
    const std::ptrdiff_t n = std::ptrdiff_t(samples.size());
    const std::ptrdiff_t len = std::ptrdiff_t(spec.length());
    const std::ptrdiff_t start = spec.start(sbox_index);
    if (len < 1 || n < 2 || start <= -n || start + len - 1 >= 2 * n - 1)
        throw config_error("extract_sbox_window: window of " + std::to_string(len) +
                           " samples does not fit a trace of " + std::to_string(n));
    std::vector<float> out(static_cast<std::size_t>(len));
    for (std::ptrdiff_t k = 0; k < len; ++k) {
        std::ptrdiff_t idx = start + k;
        if (idx < 0)
            idx = -idx;
        else if (idx >= n)
            idx = 2 * (n - 1) - idx;
        out[std::size_t(k)] = samples[std::size_t(idx)];
    }
    return out;
}

Trace extract_sbox_window(const Trace &t, std::size_t sbox_index, std::size_t sbox_count,
                          const WindowSpec &spec) {
    Trace w;
    w.nonce = t.nonce;
    w.encryption_index = t.encryption_index;
    w.samples = extract_sbox_window(t.samples, sbox_index, sbox_count, spec);
    return w;
}

namespace {
template <typename T> std::vector<double> normalize_impl(std::span<const T> t) {
    if (t.empty())
        throw config_error("normalize_trace: empty trace");
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (T v : t) {
        sum += double(v);
        lo = std::min(lo, double(v));
        hi = std::max(hi, double(v));
    }
    const double mean = sum / double(t.size());
    const double range = hi - lo;
    std::vector<double> out(t.size(), 0.0);
    if (range > 0.0)
        for (std::size_t i = 0; i < t.size(); ++i)
            out[i] = (double(t[i]) - mean) / range;
    return out;
}
} // namespace

std::vector<double> normalize_trace(std::span<const double> t) { return normalize_impl(t); }
std::vector<double> normalize_trace(std::span<const float> t) { return normalize_impl(t); }

WindowSequence sliding_windows(std::span<const double> t, std::size_t width, std::size_t stride) {
    if (width < 1 || stride < 1)
        throw config_error("sliding_windows: width and stride must be >= 1");
    if (width > t.size())
        throw config_error("sliding_windows: window width " + std::to_string(width) +
                           " exceeds trace length " + std::to_string(t.size()));
    WindowSequence seq;
    seq.width = width;
    seq.stride = stride;
    const std::size_t steps = step_count(t.size(), width, stride);
    seq.steps.resize(Eigen::Index(steps), Eigen::Index(width));
    for (std::size_t s = 0; s < steps; ++s)
        for (std::size_t k = 0; k < width; ++k)
            seq.steps(Eigen::Index(s), Eigen::Index(k)) = t[s * stride + k];
    return seq;
}

std::vector<double> overlap_average(const Eigen::MatrixXd &steps, std::size_t stride,
                                    std::size_t length) {
    std::vector<double> sum(length, 0.0);
    std::vector<unsigned> hits(length, 0);
    for (Eigen::Index s = 0; s < steps.rows(); ++s)
        for (Eigen::Index k = 0; k < steps.cols(); ++k) {
            const std::size_t idx = std::size_t(s) * stride + std::size_t(k);
            if (idx < length) {
                sum[idx] += steps(s, k);
                ++hits[idx];
            }
        }
    for (std::size_t i = 0; i < length; ++i)
        sum[i] = hits[i] ? sum[i] / hits[i] : std::numeric_limits<double>::quiet_NaN();
    return sum;
}

} // namespace sca::prep
