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

#include "sca/ascon.hpp"

#include "sca/error.hpp"

#include <bit>
#include <string>

namespace sca::ascon {

std::uint8_t sbox5(unsigned x) {
    if (x > 31)
        throw config_error("sbox5: input " + std::to_string(x) + " is not a 5-bit value");
    return kSbox[x];
}

void Block128::set_bit(unsigned i, unsigned v) {
    std::uint64_t &w = i < 64 ? w0 : w1;
    const unsigned pos = i % 64;
    w = (w & ~(std::uint64_t{1} << pos)) | (std::uint64_t{v & 1U} << pos);
}

unsigned SboxInput::pack() const {
    return (iv_bit << 4) | (key_hi << 3) | (key_lo << 2) | (nonce_hi << 1) | nonce_lo;
}

SboxInput SboxInput::unpack(unsigned x) {
    return {(x >> 4) & 1U, (x >> 3) & 1U, (x >> 2) & 1U, (x >> 1) & 1U, x & 1U};
}

std::uint8_t sensitive_data(BitPair nonce, BitPair key, unsigned iv_bit) {
    if (iv_bit > 1 || key.hi > 1 || key.lo > 1 || nonce.hi > 1 || nonce.lo > 1)
        throw config_error("sensitive_data: inputs must be single bits");
    const SboxInput in{iv_bit, key.hi, key.lo, nonce.hi, nonce.lo};
    return kSbox[in.pack()];
}

std::uint8_t column_sensitive(const InitConfig &cfg, unsigned column, BitPair key,
                              BitPair nonce) {
    key.lo ^= cfg.constant_bit(column);
    return sensitive_data(nonce, key, cfg.iv_bit(column));
}

std::array<std::uint64_t, 5> AsconInitState::words() const {
    return {iv, key.w0, key.w1, nonce.w0, nonce.w1};
}

SboxInput AsconInitState::column(unsigned i) const {
    return {unsigned((iv >> i) & 1U), key.bit(i), key.bit(i + 64), nonce.bit(i),
            nonce.bit(i + 64)};
}

AsconInitState
AsconInitState::from_columns(const std::array<SboxInput, kSboxColumns> &cols) {
    AsconInitState s;
    s.iv = 0;
    for (unsigned i = 0; i < kSboxColumns; ++i) {
        const SboxInput &c = cols[i];
        s.iv |= std::uint64_t{c.iv_bit & 1U} << i;
        s.key.set_bit(i, c.key_hi);
        s.key.set_bit(i + 64, c.key_lo);
        s.nonce.set_bit(i, c.nonce_hi);
        s.nonce.set_bit(i + 64, c.nonce_lo);
    }
    return s;
}

StateWords substitution_layer(StateWords x) {
    x[0] ^= x[4];
    x[4] ^= x[3];
    x[2] ^= x[1];
    StateWords t;
    for (int i = 0; i < 5; ++i)
        t[i] = ~x[i] & x[(i + 1) % 5];
    for (int i = 0; i < 5; ++i)
        x[i] ^= t[(i + 1) % 5];
    x[1] ^= x[0];
    x[0] ^= x[4];
    x[3] ^= x[2];
    x[2] = ~x[2];
    return x;
}

StateWords linear_diffusion(StateWords x) {
    using std::rotr;
    x[0] ^= rotr(x[0], 19) ^ rotr(x[0], 28);
    x[1] ^= rotr(x[1], 61) ^ rotr(x[1], 39);
    x[2] ^= rotr(x[2], 1) ^ rotr(x[2], 6);
    x[3] ^= rotr(x[3], 10) ^ rotr(x[3], 17);
    x[4] ^= rotr(x[4], 7) ^ rotr(x[4], 41);
    return x;
}

} // namespace sca::ascon
