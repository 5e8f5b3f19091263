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

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace sca {

TraceSet TraceSet::prefix(std::size_t n) const {
    TraceSet out;
    out.ground_truth_key = ground_truth_key;
    out.metadata = metadata;
    const std::size_t k = std::min(n, traces.size());
    out.traces.assign(traces.begin(), traces.begin() + std::ptrdiff_t(k));
    return out;
}

namespace io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large buffers in chunks.
    std::size_t off = 0;
    while (off < bytes.size()) {
        const std::size_t n = std::min<std::size_t>(bytes.size() - off, 1U << 30);
        crc = ::crc32(crc, bytes.data() + off, uInt(n));
        off += n;
    }
    return std::uint32_t(crc);
}

namespace {
template <typename T> void put(std::vector<std::uint8_t> &buf, T v) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    buf.insert(buf.end(), raw, raw + sizeof(T));
}
} // namespace

void ByteWriter::u16(std::uint16_t v) { put(buf_, v); }
void ByteWriter::u32(std::uint32_t v) { put(buf_, v); }
void ByteWriter::u64(std::uint64_t v) { put(buf_, v); }
void ByteWriter::f32(float v) { put(buf_, v); }
void ByteWriter::f64(double v) { put(buf_, v); }
void ByteWriter::bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
void ByteWriter::str(const std::string &s) {
    u32(std::uint32_t(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
}

void ByteReader::need(std::size_t n) const {
    if (remaining() < n)
        throw FormatError(FormatError::Kind::Truncated, "unexpected end of data");
}

namespace {
template <typename T> T get(std::span<const std::uint8_t> data, std::size_t &pos) {
    T v;
    std::memcpy(&v, data.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}
} // namespace

std::uint16_t ByteReader::u16() { need(2); return get<std::uint16_t>(data_, pos_); }
std::uint32_t ByteReader::u32() { need(4); return get<std::uint32_t>(data_, pos_); }
std::uint64_t ByteReader::u64() { need(8); return get<std::uint64_t>(data_, pos_); }
float ByteReader::f32() { need(4); return get<float>(data_, pos_); }
double ByteReader::f64() { need(8); return get<double>(data_, pos_); }

std::span<const std::uint8_t> ByteReader::bytes(std::size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
}

std::string ByteReader::str() {
    const std::uint32_t n = u32();
    auto b = bytes(n);
    return std::string(b.begin(), b.end());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError(FormatError::Kind::Io, "cannot open '" + path.string() + "'");
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw FormatError(FormatError::Kind::Io, "cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char *>(bytes.data()), std::streamsize(bytes.size()));
    if (!out)
        throw FormatError(FormatError::Kind::Io, "short write to '" + path.string() + "'");
}

std::filesystem::path metadata_path(const std::filesystem::path &container) {
    auto p = container;
    p += ".json";
    return p;
}

void write_traceset(const TraceSet &ts, const std::filesystem::path &path) {
    const std::size_t n = ts.samples_per_trace();
    for (const auto &t : ts.traces)
        if (t.samples.size() != n)
            throw data_error("write_traceset: traces have different lengths");

    ByteWriter w;
    w.bytes({reinterpret_cast<const std::uint8_t *>(kTraceMagic), 4});
    w.u16(kTraceVersion);
    w.u32(std::uint32_t(ts.size()));
    w.u32(std::uint32_t(n));
    w.u16(ts.ground_truth_key ? kFlagHasKey : 0);
    const std::size_t header = w.buffer().size();
    w.buffer().reserve(header + ts.size() * (16 + 4 * n) + 4);
    for (const auto &t : ts.traces) {
        w.u64(t.nonce.w0);
        w.u64(t.nonce.w1);
        for (float s : t.samples)
            w.f32(s);
    }
    const auto &buf = w.buffer();
    const std::uint32_t crc = crc32(std::span(buf).subspan(header));
    w.u32(crc);
    write_file(path, w.buffer());

    nlohmann::json meta = ts.metadata;
    if (ts.ground_truth_key)
        meta["ground_truth_key"] = {{"w0", ts.ground_truth_key->w0}, {"w1", ts.ground_truth_key->w1}};
    const std::string text = meta.dump(2) + "\n";
    write_file(metadata_path(path), {reinterpret_cast<const std::uint8_t *>(text.data()), text.size()});
}

TraceSet read_traceset(const std::filesystem::path &path) {
    const std::vector<std::uint8_t> data = read_file(path);
    ByteReader r(data);
    if (data.size() < 4 || std::memcmp(data.data(), kTraceMagic, 4) != 0)
        throw FormatError(FormatError::Kind::BadMagic, "'" + path.string() + "' is not an SCTR container");
    r.bytes(4);
    const std::uint16_t version = r.u16();
    if (version != kTraceVersion)
        throw FormatError(FormatError::Kind::UnsupportedVersion,
                          "unsupported SCTR version " + std::to_string(version));
    const std::uint32_t count = r.u32();
    const std::uint32_t samples = r.u32();
    const std::uint16_t flags = r.u16();
    const std::size_t header = r.position();

    const std::size_t record = 16 + 4 * std::size_t(samples);
    const std::size_t payload = record * count;
    if (r.remaining() < payload + 4)
        throw FormatError(FormatError::Kind::Truncated,
                          "'" + path.string() + "' is truncated: expected " +
                              std::to_string(payload + 4) + " payload bytes, found " +
                              std::to_string(r.remaining()));
    const std::uint32_t expected = crc32(std::span(data).subspan(header, payload));
    std::uint32_t stored;
    std::memcpy(&stored, data.data() + header + payload, 4);
    if (expected != stored)
        throw FormatError(FormatError::Kind::ChecksumMismatch,
                          "'" + path.string() + "' failed its CRC-32 check");

    TraceSet ts;
    ts.traces.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Trace &t = ts.traces[i];
        t.encryption_index = i;
        t.nonce.w0 = r.u64();
        t.nonce.w1 = r.u64();
        t.samples.resize(samples);
        for (auto &s : t.samples)
            s = r.f32();
    }

    const auto meta_path = metadata_path(path);
    if (std::filesystem::exists(meta_path)) {
        const auto raw = read_file(meta_path);
        try {
            ts.metadata = nlohmann::json::parse(raw.begin(), raw.end());
        } catch (const nlohmann::json::exception &e) {
            throw data_error("malformed metadata '" + meta_path.string() + "': " + e.what());
        }
        if (ts.metadata.contains("ground_truth_key")) {
            const auto &k = ts.metadata["ground_truth_key"];
            ts.ground_truth_key = ascon::Block128{k.at("w0").get<std::uint64_t>(),
                                                  k.at("w1").get<std::uint64_t>()};
            ts.metadata.erase("ground_truth_key");
        }
    }
    if ((flags & kFlagHasKey) && !ts.ground_truth_key)
        throw data_error("'" + path.string() + "' declares a ground-truth key but its metadata has none");
    return ts;
}

} // namespace io
} // namespace sca
