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

#include "qst/gf2k.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>

namespace qst {

namespace {

struct FieldData {
    int k;
    std::uint32_t poly;
    std::array<std::uint32_t, 12> basis;
};

// Smallest irreducible polynomial of each degree and a matching self-dual
// basis (polynomial representation), verified at construction.
constexpr FieldData kFields[] = {
    {1, 0x0003, {0x001}},
    {2, 0x0007, {0x002, 0x003}},
    {3, 0x000b, {0x003, 0x005, 0x007}},
    {4, 0x0013, {0x008, 0x00b, 0x00d, 0x00f}},
    {5, 0x0025, {0x003, 0x005, 0x00c, 0x011, 0x01a}},
    {6, 0x0043, {0x020, 0x023, 0x031, 0x037, 0x03b, 0x03f}},
    {7, 0x0083, {0x003, 0x041, 0x047, 0x063, 0x06f, 0x077, 0x07f}},
    {8, 0x011b, {0x020, 0x023, 0x030, 0x037, 0x038, 0x06f, 0x099, 0x0cb}},
    {9, 0x0203, {0x003, 0x101, 0x107, 0x183, 0x18f, 0x1c7, 0x1df, 0x1ef, 0x1ff}},
    {10, 0x0409, {0x080, 0x083, 0x0c1, 0x0c7, 0x0e3, 0x0ef, 0x0f7, 0x1fd, 0x2fb, 0x3f9}},
    {11, 0x0805,
     {0x003, 0x101, 0x107, 0x183, 0x18d, 0x1c7, 0x1d9, 0x1e7, 0x358, 0x4a5, 0x60e}},
    {12, 0x1009,
     {0x200, 0x203, 0x301, 0x307, 0x383, 0x38f, 0x3c7, 0x3df, 0x3ef, 0x7fd, 0xbfb, 0xff9}},
};

}  // namespace

GfField::GfField(int k) : k_(k) {
    if (k < 1 || k > 12) throw Unsupported("GfField: k must lie in 1..12");
    const FieldData& data = kFields[k - 1];
    poly_ = data.poly;
    selfdual_.assign(data.basis.begin(), data.basis.begin() + k);

    const std::uint32_t q = 1u << k;
    sd2poly_.assign(q, 0);
    for (std::uint32_t a = 0; a < q; ++a) {
        std::uint32_t x = 0;
        for (int i = 0; i < k; ++i) {
            if (a >> i & 1u) x ^= selfdual_[i];
        }
        sd2poly_[a] = x;
    }
    poly2sd_.assign(q, 0);
    for (std::uint32_t a = 0; a < q; ++a) poly2sd_[sd2poly_[a]] = a;

    // startup self-check: trace orthonormality of the hardcoded basis
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const int want = i == j ? 1 : 0;
            if (trace_poly(mul_poly(selfdual_[i], selfdual_[j])) != want) {
                throw DecompositionFailure("GfField: self-dual basis table corrupt for k=" +
                                           std::to_string(k));
            }
        }
    }
}

const GfField& GfField::get(int k) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GfField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it == cache.end()) {
        it = cache.emplace(k, std::unique_ptr<GfField>(new GfField(k))).first;
    }
    return *it->second;
}

std::uint32_t GfField::mul_poly(std::uint32_t a, std::uint32_t b) const {
    std::uint64_t acc = 0;
    std::uint64_t shifted = a;
    while (b) {
        if (b & 1u) acc ^= shifted;
        shifted <<= 1;
        b >>= 1;
    }
    // reduce modulo p_k
    const int dp = k_;
    for (int bit = 2 * k_ - 2; bit >= dp; --bit) {
        if (acc >> bit & 1u) acc ^= static_cast<std::uint64_t>(poly_) << (bit - dp);
    }
    return static_cast<std::uint32_t>(acc);
}

int GfField::trace_poly(std::uint32_t a) const {
    std::uint32_t t = 0;
    std::uint32_t y = a;
    for (int i = 0; i < k_; ++i) {
        t ^= y;
        y = mul_poly(y, y);
    }
    return static_cast<int>(t & 1u);
}

std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, const GfField& field) {
    return field.mul_poly(a, b);
}

}  // namespace qst
