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
#include <span>
#include <vector>

namespace sca::nnf {

inline constexpr unsigned kBits = 5;
inline constexpr unsigned kMonomials = 1U << kBits; // includes the constant term
inline constexpr unsigned kFullOrder = kBits;

/// Monomial masks U ordered by (degree, mask value). Entry 0 is the constant.
/// A mask bit set at position p selects bit p of the 5-bit value, so the
/// mask 0b10000 is the MSB monomial.
const std::array<std::uint8_t, kMonomials> &monomial_order();

inline unsigned degree(unsigned mask) { return unsigned(__builtin_popcount(mask)); }

/// X^U = prod x_i^{u_i}, i.e. 1 iff every bit selected by U is set in x.
inline unsigned monomial(unsigned x, unsigned mask) { return (x & mask) == mask ? 1U : 0U; }

/// Number of monomials (including the constant) of degree <= order.
unsigned basis_size(unsigned order);

/// [1, X^U ...] over the ordered basis, truncated at `order`.
/// Throws sca::Error (Config) for x > 31.
std::vector<double> monomial_vector(unsigned x, unsigned order = kFullOrder);

/// Real-valued coefficients over the full ordered monomial basis.
struct Coefficients {
    std::array<double, kMonomials> alpha{};

    /// Evaluates the model keeping only monomials of degree <= order.
    double evaluate(unsigned x, unsigned order = kFullOrder) const;
    Coefficients truncated(unsigned order) const;

    friend bool operator==(const Coefficients &, const Coefficients &) = default;
};

/// Coefficients that reproduce the Hamming weight exactly.
Coefficients hamming_weight_model();
/// Coefficients that reproduce the MSB exactly.
Coefficients msb_model();

} // namespace sca::nnf
