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

#include "qst/design.hpp"
#include "qst/kernels.hpp"
#include "qst/measurement.hpp"

namespace qst {

struct LseResult {
    HermMat rho_hat;            // unit trace; not necessarily PSD
    double loss = 0.0;          // |D[rho_hat] - P|_2^2
    bool used_closed_form = false;
    int null_space_dim = 0;     // unidentifiable directions (pseudo-inverse path)
};

struct LseOptions {
    /// When set, skips the Gram assembly and applies the unitary-design
    /// closed form with this alpha directly.
    std::optional<double> assume_alpha;
    double unitary_tol = 1e-8;
    double pinv_cutoff = 1e-10;  // relative singular value cutoff
};

/// Tensorized least squares over the unit-trace hyperplane.  Complete designs
/// invert the Gram superoperator; verified unitary designs take the alpha
/// closed form; incomplete designs return the minimum-Frobenius-norm
/// minimizer through the pseudo-inverse.
LseResult lse_fit(const Design& d, const CountsTable& counts, const LseOptions& opts = {});

/// Closed-form MSE of the LSE under a rank-1 alpha_Q-unitary design.
double lse_mse_theory(const Design& d, const DensityMatrix& rho, int n, std::int64_t r);
double lse_mse_theory(FieldTag field, int q, double purity, int n, std::int64_t r);

/// Kernel regression operators for a fixed (design, kernel) pair: the kernel
/// Gram superoperator, the effective data matrix, and the centered inversion.
struct QuarkOperators {
    FieldTag field;
    int q = 0;
    int n = 0;
    SuperOp h;                          // kernel Gram superoperator
    HermMat p_k;                        // effective data matrix
    SuperOp centered_inverse;           // A_K = H^{-1} C*, self-adjoint; empty if singular
    double condition = 0.0;             // spectral condition number of H
    std::vector<RealMatrix> proj_vecs;  // per observable: columns vec(Pi_ik)
    std::vector<RealMatrix> m_vecs;     // per observable: columns vec(M_ik)
};

/// Assembles the kernel regression operators.  With require_invertible the
/// call fails on a kernel Gram superoperator whose condition number exceeds
/// 1e12 (the inversion hypothesis of the estimator); pass false for
/// covariance-only use on incomplete designs.
QuarkOperators quark_operators(const Design& d, const Kernel& k, const CountsTable& counts,
                               bool require_invertible = true);

struct QuarkResult {
    HermMat rho_hat;
    double lagrange_lambda = 0.0;
    double superop_condition = 0.0;
};

/// Trace-constrained minimizer of the kernel embedding loss.
QuarkResult quark_fit(const QuarkOperators& ops);

/// Scaled covariance of the effective data matrix, r * Cov(P_K).
SuperOp quark_covariance(const QuarkOperators& ops, const DensityMatrix& rho);

/// CLT covariance of sqrt(r) (rho_hat - rho): the sandwich A S A.
SuperOp clt_covariance(const QuarkOperators& ops, const DensityMatrix& rho);

struct ConcentrationBound {
    double bennett = 1.0;
    double bernstein = 1.0;
    double m2 = 0.0;  // directional second moment <A S A dir, dir> / r
};

/// Directional tail bound for <rho_hat - rho, direction> > t at r shots.
ConcentrationBound concentration_bound(const QuarkOperators& ops, const DensityMatrix& rho,
                                       const HermMat& direction, double t, std::int64_t r);

}  // namespace qst
