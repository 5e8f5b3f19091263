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

#include "sca/trace.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace sca::prep {

/// Per-S-box window of l = samples_per_clock + delta_l samples centered on
/// r_i = (i + 1/2) * samples_per_clock.
struct WindowSpec {
    std::size_t samples_per_clock = 125;
    std::size_t delta_l = 24;

    std::size_t length() const { return samples_per_clock + delta_l; }
    /// First sample of the window for S-box `sbox_index` (may be negative).
    std::ptrdiff_t start(std::size_t sbox_index) const;
};

/// Samples of the S-box window, reflecting indices that fall off either end
/// (x[-1] = x[1]). Throws Config if the window cannot be formed.
std::vector<float> extract_sbox_window(std::span<const float> samples, std::size_t sbox_index,
                                       std::size_t sbox_count, const WindowSpec &spec);

Trace extract_sbox_window(const Trace &t, std::size_t sbox_index, std::size_t sbox_count,
                          const WindowSpec &spec);

/// (t - mean) / (max - min); all zeros for a constant input.
std::vector<double> normalize_trace(std::span<const double> t);
std::vector<double> normalize_trace(std::span<const float> t);

/// Windows of width W with stride S, one row per step. Trailing samples that
/// do not fill a whole window are dropped.
struct WindowSequence {
    std::size_t width = 0;
    std::size_t stride = 0;
    Eigen::MatrixXd steps; ///< step count x width

    std::size_t step_count() const { return std::size_t(steps.rows()); }
};

inline std::size_t step_count(std::size_t length, std::size_t width, std::size_t stride) {
    return (length - width) / stride + 1;
}

WindowSequence sliding_windows(std::span<const double> t, std::size_t width, std::size_t stride);

/// Overlap-add average of a window sequence back onto `length` samples.
/// Samples not covered by any window are NaN.
std::vector<double> overlap_average(const Eigen::MatrixXd &steps, std::size_t stride,
                                    std::size_t length);

} // namespace sca::prep
