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

#include "sca/container.hpp"
#include "sca/error.hpp"
#include "sca/nn.hpp"

#include <cstring>
#include <string>

namespace sca::nn {

namespace {
constexpr char kMagic[4] = {'S', 'C', 'C', 'K'};
}

void save_checkpoint(const std::filesystem::path &path, const std::vector<Param *> &params) {
    io::ByteWriter w;
    w.bytes({reinterpret_cast<const std::uint8_t *>(kMagic), 4});
    w.u16(kCheckpointVersion);
    w.u32(std::uint32_t(params.size()));
    for (const Param *p : params) {
        w.str(p->name);
        w.u32(std::uint32_t(p->value.rows()));
        w.u32(std::uint32_t(p->value.cols()));
        for (Eigen::Index k = 0; k < p->value.size(); ++k)
            w.f64(p->value.data()[k]);
    }
    w.u32(io::crc32(w.buffer()));
    io::write_file(path, w.buffer());
}

void load_checkpoint(const std::filesystem::path &path, const std::vector<Param *> &params) {
    using io::FormatError;
    const auto data = io::read_file(path);
    if (data.size() < 4 + 2 + 4 + 4)
        throw FormatError(FormatError::Kind::Truncated, path.string() + ": checkpoint truncated");
    if (std::memcmp(data.data(), kMagic, 4) != 0)
        throw FormatError(FormatError::Kind::BadMagic, path.string() + ": not a checkpoint");
    const std::span<const std::uint8_t> body(data.data(), data.size() - 4);
    io::ByteReader tail(std::span<const std::uint8_t>(data.data() + body.size(), 4));
    if (tail.u32() != io::crc32(body))
        throw FormatError(FormatError::Kind::ChecksumMismatch,
                          path.string() + ": checkpoint checksum mismatch");
    io::ByteReader r(body);
    r.bytes(4);
    const auto version = r.u16();
    if (version != kCheckpointVersion)
        throw FormatError(FormatError::Kind::UnsupportedVersion,
                          path.string() + ": unsupported checkpoint version " +
                              std::to_string(version));
    const auto count = r.u32();
    if (count != params.size())
        throw data_error(path.string() + ": checkpoint holds " + std::to_string(count) +
                         " tensors, model has " + std::to_string(params.size()));
    // validate the whole manifest before overwriting anything
    std::vector<Eigen::MatrixXd> loaded;
    loaded.reserve(count);
    for (const Param *p : params) {
        const std::string name = r.str();
        const auto rows = r.u32();
        const auto cols = r.u32();
        if (name != p->name || rows != p->value.rows() || cols != p->value.cols())
            throw data_error(path.string() + ": tensor '" + name + "' " + std::to_string(rows) +
                             "x" + std::to_string(cols) + " does not match '" + p->name + "' " +
                             std::to_string(p->value.rows()) + "x" +
                             std::to_string(p->value.cols()));
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index k = 0; k < m.size(); ++k)
            m.data()[k] = r.f64();
        loaded.push_back(std::move(m));
    }
    if (r.remaining() != 0)
        throw data_error(path.string() + ": trailing bytes in checkpoint");
    for (std::size_t k = 0; k < params.size(); ++k) {
        params[k]->value = std::move(loaded[k]);
        params[k]->zero_grad();
    }
}

} // namespace sca::nn
