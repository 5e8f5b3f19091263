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

#include <array>
#include <cstdint>

namespace sca::ascon {

/// Ascon-128 initialization vector (k=128, r=64, a=12, b=6).
inline constexpr std::uint64_t kAscon128Iv = 0x80400c0600000000ULL;

/// Round constant XORed into x2 before the first substitution layer of the
/// 12-round initialization permutation.
inline constexpr std::uint64_t kFirstRoundConstant = 0xf0ULL;

inline constexpr unsigned kSboxBits = 5;
inline constexpr unsigned kSboxColumns = 64;

/// Ascon 5-bit S-box, input bit 4 (MSB) is the x0 row, bit 0 is the x4 row.
inline constexpr std::array<std::uint8_t, 32> kSbox = {
    0x04, 0x0b, 0x1f, 0x14, 0x1a, 0x15, 0x09, 0x02, 0x1b, 0x05, 0x08,
    0x12, 0x1d, 0x03, 0x06, 0x1c, 0x1e, 0x13, 0x07, 0x0e, 0x00, 0x0d,
    0x11, 0x18, 0x10, 0x0c, 0x01, 0x19, 0x16, 0x0a, 0x0f, 0x17};

/// Throws sca::Error (Config) for x > 31.
std::uint8_t sbox5(unsigned x);

/// A 128-bit quantity split over two state words. Bit i (0 <= i < 64) is
/// bit i of `w0`; bit i + 64 is bit i of `w1`.
struct Block128 {
    std::uint64_t w0 = 0;
    std::uint64_t w1 = 0;

    unsigned bit(unsigned i) const {
        return i < 64 ? unsigned((w0 >> i) & 1U) : unsigned((w1 >> (i - 64)) & 1U);
    }
    void set_bit(unsigned i, unsigned v);

    friend bool operator==(const Block128 &, const Block128 &) = default;
};

/// Two bits (b_i, b_{i+64}) of a key or nonce feeding S-box column i.
struct BitPair {
    unsigned hi = 0; ///< b_i
    unsigned lo = 0; ///< b_{i+64}

    unsigned packed() const { return (hi << 1) | lo; }
    static BitPair from_packed(unsigned v) { return {(v >> 1) & 1U, v & 1U}; }

    friend bool operator==(const BitPair &, const BitPair &) = default;
};

inline BitPair column_bits(const Block128 &b, unsigned column) {
    return {b.bit(column), b.bit(column + 64)};
}

struct SboxInput {
    unsigned iv_bit = 0;
    unsigned key_hi = 0;
    unsigned key_lo = 0;
    unsigned nonce_hi = 0;
    unsigned nonce_lo = 0;

    /// iv_bit is the MSB, nonce_lo the LSB.
    unsigned pack() const;
    static SboxInput unpack(unsigned x);

    friend bool operator==(const SboxInput &, const SboxInput &) = default;
};

/// Output of the S-box for the given public and secret input bits.
std::uint8_t sensitive_data(BitPair nonce, BitPair key, unsigned iv_bit);

/// Which IV and whether the first round constant is applied before the
/// attacked substitution layer.
struct InitConfig {
    std::uint64_t iv = kAscon128Iv;
    bool round_constant = false;

    unsigned iv_bit(unsigned column) const { return unsigned((iv >> column) & 1U); }
    /// Bit that the round constant flips in the x2 (key_lo) row of a column.
    unsigned constant_bit(unsigned column) const {
        return round_constant ? unsigned((kFirstRoundConstant >> column) & 1U) : 0U;
    }
};

/// Returns the configured IV word.
inline std::uint64_t iv_bits(const InitConfig &cfg = {}) { return cfg.iv; }

/// Sensitive value of S-box `column` under `cfg`.
std::uint8_t column_sensitive(const InitConfig &cfg, unsigned column, BitPair key,
                              BitPair nonce);

/// The five 64-bit words x0..x4 after loading IV, key and nonce.
struct AsconInitState {
    std::uint64_t iv = kAscon128Iv;
    Block128 key;
    Block128 nonce;

    std::array<std::uint64_t, 5> words() const;
    SboxInput column(unsigned i) const;
    static AsconInitState from_columns(const std::array<SboxInput, kSboxColumns> &cols);

    friend bool operator==(const AsconInitState &, const AsconInitState &) = default;
};

using StateWords = std::array<std::uint64_t, 5>;

/// Bit-sliced substitution layer over all 64 columns.
StateWords substitution_layer(StateWords x);

/// Linear diffusion layer p_L.
StateWords linear_diffusion(StateWords x);

} // namespace sca::ascon
