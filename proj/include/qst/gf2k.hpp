// Copyright 2026 The qst authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "qst/errors.hpp"

namespace qst {

/// GF(2^k) arithmetic, 1 <= k <= 12.  Elements live in two coordinate
/// systems: the polynomial basis {1, x, .., x^{k-1}} modulo the hardcoded
/// irreducible p_k (bit i = coefficient of x^i), and a hardcoded self-dual
/// basis {d_i} with Tr(d_i d_j) = delta_ij, under which the field trace of a
/// product is the plain GF(2) dot product of coordinates.  Both tables are
/// re-verified at construction.
class GfField {
  public:
    static const GfField& get(int k);

    int k() const { return k_; }
    int order() const { return 1u << k_; }
    std::uint32_t irreducible_poly() const { return poly_; }
    const std::vector<std::uint32_t>& selfdual_basis() const { return selfdual_; }

    /// Carryless product modulo p_k in the polynomial basis.
    std::uint32_t mul_poly(std::uint32_t a, std::uint32_t b) const;

    /// Field trace Tr(a) = a + a^2 + ... + a^{2^{k-1}} of a polynomial-basis
    /// element, as 0/1.
    int trace_poly(std::uint32_t a) const;

    /// Product in self-dual coordinates (table lookups, O(1)).
    std::uint32_t mul_sd(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        return poly2sd_[mul_poly(sd2poly_[a], sd2poly_[b])];
    }

    std::uint32_t sd_to_poly(std::uint32_t a) const { return sd2poly_[a]; }
    std::uint32_t poly_to_sd(std::uint32_t x) const { return poly2sd_[x]; }

  private:
    explicit GfField(int k);
    int k_;
    std::uint32_t poly_;
    std::vector<std::uint32_t> selfdual_;
    std::vector<std::uint32_t> sd2poly_;
    std::vector<std::uint32_t> poly2sd_;
};

/// Polynomial-basis product of two k-bit patterns.
std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, const GfField& field);

}  // namespace qst
