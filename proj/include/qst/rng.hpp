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
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qst/field.hpp"
#include "qst/herm.hpp"

namespace qst {

/// SplitMix64 mixing step; the basis of substream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Substream seed for repetition j of a master seed.  Parallel and serial
/// runs agree exactly because each repetition depends only on (seed, j).
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t j) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(j + 0x517cc1b727220a95ULL));
}

/// Seeded random stream.  Exclusively owned by one consumer at a time.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::mt19937_64& engine() { return gen_; }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }
    double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    std::int64_t binomial(std::int64_t n, double p) {
        if (p <= 0.0) return 0;
        if (p >= 1.0) return n;
        return std::binomial_distribution<std::int64_t>(n, p)(gen_);
    }

  private:
    std::mt19937_64 gen_;
};

/// Multinomial(r, probs) draw via sequential conditional binomials: O(l) per
/// row, stable for outcome counts up to 2^11.
std::vector<std::int64_t> multinomial_counts(const RealVector& probs, std::int64_t shots, Rng& rng);

/// Haar-distributed random unitary (orthogonal for the real field) via QR of
/// an i.i.d. Gaussian matrix with R-diagonal phase correction.
Matrix haar_unitary(FieldTag field, int q, Rng& rng);

/// Random density matrix: given eigenvalues (a distribution) conjugated by a
/// Haar-random basis.
HermMat random_density(FieldTag field, const RealVector& eigenvalues, Rng& rng);

/// Random self-adjoint matrix with i.i.d. Gaussian coordinates in the
/// orthonormal basis.
HermMat random_herm(FieldTag field, int q, Rng& rng);

/// Deterministic quasi-uniform mesh on the unit sphere S^2.
std::vector<Eigen::Vector3d> fibonacci_sphere(int n);

}  // namespace qst
