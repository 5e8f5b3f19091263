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

#include "sca/nnf.hpp"

#include "sca/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace sca::nnf {

const std::array<std::uint8_t, kMonomials> &monomial_order() {
    static const std::array<std::uint8_t, kMonomials> order = [] {
        std::array<std::uint8_t, kMonomials> o{};
        std::iota(o.begin(), o.end(), std::uint8_t{0});
        std::stable_sort(o.begin(), o.end(), [](unsigned a, unsigned b) {
            return degree(a) != degree(b) ? degree(a) < degree(b) : a < b;
        });
        return o;
    }();
    return order;
}

unsigned basis_size(unsigned order) {
    const auto &o = monomial_order();
    return unsigned(std::count_if(o.begin(), o.end(),
                                  [order](unsigned m) { return degree(m) <= order; }));
}

std::vector<double> monomial_vector(unsigned x, unsigned order) {
    if (x >= kMonomials)
        throw config_error("monomial_vector: " + std::to_string(x) + " is not a 5-bit value");
    std::vector<double> v;
    v.reserve(basis_size(order));
    for (unsigned mask : monomial_order()) {
        if (degree(mask) > order)
            break;
        v.push_back(monomial(x, mask));
    }
    return v;
}

double Coefficients::evaluate(unsigned x, unsigned order) const {
    const auto &o = monomial_order();
    double acc = 0.0;
    for (unsigned k = 0; k < kMonomials; ++k) {
        if (degree(o[k]) > order)
            break;
        if (monomial(x, o[k]))
            acc += alpha[k];
    }
    return acc;
}

Coefficients Coefficients::truncated(unsigned order) const {
    Coefficients c = *this;
    const auto &o = monomial_order();
    for (unsigned k = 0; k < kMonomials; ++k)
        if (degree(o[k]) > order)
            c.alpha[k] = 0.0;
    return c;
}

Coefficients hamming_weight_model() {
    Coefficients c;
    const auto &o = monomial_order();
    for (unsigned k = 0; k < kMonomials; ++k)
        if (degree(o[k]) == 1)
            c.alpha[k] = 1.0;
    return c;
}

Coefficients msb_model() {
    Coefficients c;
    const auto &o = monomial_order();
    for (unsigned k = 0; k < kMonomials; ++k)
        if (o[k] == 0x10)
            c.alpha[k] = 1.0;
    return c;
}

} // namespace sca::nnf
