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

#include "qst/herm.hpp"
#include "qst/rng.hpp"

namespace qst {

/// Unit-trace, positive semi-definite self-adjoint matrix.
class DensityMatrix {
  public:
    explicit DensityMatrix(HermMat mat);

    const HermMat& herm() const { return mat_; }
    const Matrix& mat() const { return mat_.mat(); }
    int dim() const { return mat_.dim(); }
    FieldTag field() const { return mat_.field(); }
    double purity() const { return (mat_.mat() * mat_.mat()).trace().real(); }

  private:
    HermMat mat_;
};

/// Positive operator-valued measure over a finite outcome set.  Outcome
/// labels are the spectrum values themselves; effects are PSD and sum to I.
struct Povm {
    std::vector<double> outcomes;
    std::vector<HermMat> effects;

    int dim() const { return effects.empty() ? 0 : effects.front().dim(); }
    int num_outcomes() const { return static_cast<int>(effects.size()); }

    /// Validates the effect-sum and positivity invariants; throws on failure.
    void validate() const;
};

/// Empirical outcome frequencies for a collection of observables.  shots == 0
/// marks the infinite-shot sentinel: probs then carries exact Born
/// probabilities so unbiasedness identities are testable deterministically.
struct CountsTable {
    struct Row {
        std::vector<std::int64_t> counts;  // empty in exact mode
        RealVector probs;                  // p_ik = c_ik / r, or exact d_ik
    };
    std::vector<Row> rows;
    std::int64_t shots = 0;

    bool exact() const { return shots == 0; }
    int num_observables() const { return static_cast<int>(rows.size()); }
};

/// Born rule: probabilities tr(rho * effect_k), clamped at -1e-10 and
/// renormalized when the total drift is below 1e-9.
RealVector born_probs(const DensityMatrix& rho, const Povm& nu);

/// One multinomial draw of r shots from the Born distribution.
CountsTable::Row sample_counts(const DensityMatrix& rho, const Povm& nu, std::int64_t shots,
                               Rng& rng);

/// PVM induced by a spectral decomposition.
Povm povm_from_spectral(const SpectralDecomp& obs);

/// Symmetric bit-flip POVM for a +/-1 observable: outcome labels stay +/-1,
/// effects mix the eigenprojections with weight eta.
Povm bitflip_povm(const SpectralDecomp& obs, double eta);

/// Modular additive noise on a number observable N = sum_k k Pi_k over Z_q:
/// effect_j = sum_k eta_{(j-k) mod q} Pi_k.
Povm modular_noise_povm(const SpectralDecomp& number_obs, const RealVector& eta);

/// Bloch-vector maps for complex qubits: rho = (I + a . sigma)/2.
DensityMatrix bloch_to_density(const Eigen::Vector3d& a);
Eigen::Vector3d density_to_bloch(const DensityMatrix& rho);

/// Pauli matrices (physical convention, Y = [[0,-i],[i,0]]).
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix pauli(int axis);  // 0 -> x, 1 -> y, 2 -> z

}  // namespace qst
