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

#include <optional>
#include <vector>

#include "qst/herm.hpp"
#include "qst/measurement.hpp"
#include "qst/rng.hpp"

namespace qst {

/// Real matrix acting on the vectorized Hermitian space (D_sa x D_sa).
struct SuperOp {
    RealMatrix matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
    RealVector apply(const RealVector& coords) const { return matrix * coords; }
    HermMat apply(const HermBasis& basis, const HermMat& s) const {
        return basis.devectorize(matrix * basis.vectorize(s));
    }
};

struct CompletenessReport {
    bool complete = false;
    int null_space_dim = 0;
};

struct UnitaryDesignReport {
    bool is_unitary = false;
    double alpha_hat = 0.0;     // mean traceless Gram eigenvalue
    double alpha_theory = 0.0;  // ((q_bar - 1)/(q - 1)) * alpha_Q
    double deviation = 0.0;     // spectral distance from alpha_theory * Id
};

/// Ordered collection of observables over a common (q, field), with the
/// design-tensor algebra.  Observables with a single distinct eigenvalue are
/// rejected at construction since they carry no information.
class Design {
  public:
    Design(FieldTag field, int q, std::vector<SpectralDecomp> observables);

    int q() const { return q_; }
    FieldTag field() const { return field_; }
    int size() const { return static_cast<int>(obs_.size()); }
    const std::vector<SpectralDecomp>& observables() const { return obs_; }
    const SpectralDecomp& observable(int i) const { return obs_[i]; }

    /// Mean number of distinct eigenvalues, q_bar.
    double q_bar() const;

    /// True when every eigenprojection is rank one.
    bool rank_one() const;

    /// Gram superoperator D*D/n as a dense real matrix (cached).
    const SuperOp& gram_superop() const;

    const HermBasis& basis() const { return *basis_; }

  private:
    FieldTag field_;
    int q_;
    std::vector<SpectralDecomp> obs_;
    const HermBasis* basis_;
    mutable std::optional<SuperOp> gram_;
};

/// Design tensor application: row i holds d_ik[S]/m_ik repeated m_ik times.
RealMatrix design_apply(const Design& d, const HermMat& s);

/// Adjoint of the design tensor: eigenspace-averaged row entries weight the
/// eigenprojections.
HermMat design_adjoint(const Design& d, const RealMatrix& a);

/// Multiplicity-stretched data matrix built from a counts table.
RealMatrix counts_to_data_matrix(const Design& d, const CountsTable& counts);

/// Quadratic loss |D[S] - P|_2^2 of the tensorized regression.
double design_loss(const Design& d, const HermMat& s, const RealMatrix& data);

CompletenessReport check_complete(const Design& d, double tol = 1e-8);
UnitaryDesignReport check_unitary_design(const Design& d, double tol = 1e-8);

/// n observables V_i O V_i* with Haar-distributed V_i; the seed observable
/// must have q distinct eigenvalues.
Design haar_random_design(FieldTag field, int q, int n, std::uint64_t seed,
                          const SpectralDecomp& seed_observable);

/// Qubit observables u_i . sigma from (internally normalized) Bloch vectors.
Design qubit_bloch_design(const std::vector<Eigen::Vector3d>& unit_vectors);

/// Rebit design of rotated Diag(+1,-1) observables at the given angles.
Design rebit_angle_design(const std::vector<double>& angles);

/// Local Pauli measurement settings on k qubits, modeled as joint
/// measurements: one observable per axis tuple, whose eigenprojections are
/// the tensor products of the local +/-1 eigenprojections over the measured
/// qubits.  With include_identity_factors the 4^k - 1 settings with
/// unmeasured (identity) slots are included; otherwise all k qubits are
/// measured, giving 3^k rank-1 settings.
Design pauli_tensor_design(int k, bool include_identity_factors = false);

namespace reference {
/// Single-threaded Gram assembly, kept as the oracle for the parallel path.
SuperOp gram_superop_serial(const Design& d);
}  // namespace reference

}  // namespace qst
