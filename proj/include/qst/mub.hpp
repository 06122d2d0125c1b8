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

#include "qst/design.hpp"
#include "qst/gf2k.hpp"
#include "qst/herm.hpp"
#include "qst/measurement.hpp"

namespace qst {

/// Walsh-Hadamard transform y_a = sum_b (-1)^{a.b} x_b, in place, length 2^m.
/// fwht(fwht(x)) = q x.
void fwht(double* data, int length);
void fwht(RealVector& data);
void fwht_complex(Complex* data, int length);

/// Complete MUB for q = 2^k: the computational clique plus one clique per
/// field element lambda, each generated by (e_j | lambda * e_j) in self-dual
/// coordinates.  Phase tables hold the +/-1 corrections that align ordered
/// generator products with the physical Pauli operators (Y = i X Z fixed
/// throughout).
///
/// Clique order: index c in 0..q-1 is the clique of lambda = c (self-dual
/// coordinates); index q is the computational basis clique.  Outcome order
/// within a clique: the joint generator sign pattern a in 0..q-1.
class MubDesign {
  public:
    explicit MubDesign(int k);

    int k() const { return k_; }
    int q() const { return q_; }
    int num_cliques() const { return q_ + 1; }
    const GfField& field() const { return *field_; }

    /// Phase correction phi_lambda(b) for clique index c.
    int phase(int clique, std::uint32_t b) const { return phase_[clique][b]; }

    /// Pauli label (xpart | zpart) of the clique element b (b != 0 for the
    /// finite cliques identifies (b | lambda*b); for the computational clique
    /// it is (0 | b)).
    std::pair<std::uint32_t, std::uint32_t> pauli_label(int clique, std::uint32_t b) const;

    /// Dense rank-1 projector of outcome a in the given clique.
    Matrix projector(int clique, std::uint32_t a) const;

    /// Born probabilities of all cliques for a state, via sparse Pauli traces
    /// and per-clique transforms; rows follow the clique order.
    RealMatrix born_probs(const DensityMatrix& rho) const;

    /// The induced Design (dense projectors; intended for small k).
    Design to_design() const;

  private:
    int k_;
    int q_;
    const GfField* field_;
    std::vector<std::vector<std::int8_t>> phase_;  // [clique][b] in {+1,-1}
};

/// LSE reconstruction from per-clique counts via the inverse transform:
/// generalized Bloch coefficients per clique in O(q log q), assembled into
/// the dense estimate in O(q^2 log q) overall.  Row i of counts must follow
/// the MubDesign clique order.
HermMat mub_reconstruct(const MubDesign& mub, const CountsTable& counts);

namespace reference {
/// Quadratic-time transform, the oracle for fwht.
RealVector wht_naive(const RealVector& x);

/// Projector-sum reconstruction sum_{c,a} p_{c,a} Pi_{c,a} - I, the oracle
/// for mub_reconstruct at small k.
HermMat mub_reconstruct_projector_sum(const MubDesign& mub, const CountsTable& counts);
}  // namespace reference

}  // namespace qst
