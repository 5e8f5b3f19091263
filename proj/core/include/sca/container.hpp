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

#include "sca/error.hpp"
#include "sca/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace sca::io {

// SCTR container, little-endian:
//
//   "SCTR" | version u16 | trace count u32 | samples per trace u32 | flags u16
//   count x ( nonce 16 bytes (w0 then w1) | samples x f32 )
//   CRC-32 u32 of the per-trace records
//
// Structured metadata (config echo, ground-truth key) lives in a companion
// `<path>.json` file.

inline constexpr char kTraceMagic[4] = {'S', 'C', 'T', 'R'};
inline constexpr std::uint16_t kTraceVersion = 1;
inline constexpr std::uint16_t kFlagHasKey = 0x0001;

class FormatError : public Error {
  public:
    enum class Kind { Io, BadMagic, UnsupportedVersion, Truncated, ChecksumMismatch };

    FormatError(Kind kind, const std::string &what)
        : Error(ErrorKind::Data, what), kind_(kind) {}

    Kind format_kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

std::filesystem::path metadata_path(const std::filesystem::path &container);

void write_traceset(const TraceSet &ts, const std::filesystem::path &path);
TraceSet read_traceset(const std::filesystem::path &path);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

/// Little-endian byte buffer helpers shared by the binary formats.
class ByteWriter {
  public:
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f32(float v);
    void f64(double v);
    void bytes(std::span<const std::uint8_t> b);
    void str(const std::string &s);

    std::vector<std::uint8_t> &buffer() { return buf_; }
    const std::vector<std::uint8_t> &buffer() const { return buf_; }

  private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
  public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    float f32();
    double f64();
    std::span<const std::uint8_t> bytes(std::size_t n);
    std::string str();

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

  private:
    void need(std::size_t n) const;

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

} // namespace sca::io
