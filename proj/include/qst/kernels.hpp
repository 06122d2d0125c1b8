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
#include <utility>
#include <vector>

#include "qst/design.hpp"
#include "qst/herm.hpp"
#include "qst/measurement.hpp"

namespace qst {

/// Scalar kernel on spectrum values.  ZeroOne compares labels exactly;
/// Gaussian is exp(-c (x-y)^2); Polynomial is (offset + x y)^degree.
class Kernel {
  public:
    enum class Variant { ZeroOne, Gaussian, Polynomial };

    static Kernel zero_one() { return Kernel(Variant::ZeroOne, 0.0, 0); }
    static Kernel gaussian(double bandwidth);
    static Kernel polynomial(int degree, double offset);

    double operator()(double x, double y) const;
    Variant variant() const { return variant_; }
    double bandwidth() const { return param_; }
    double offset() const { return param_; }
    int degree() const { return degree_; }

    /// Rescaled kernel c * K; the QUARK estimator is invariant under this.
    Kernel scaled(double c) const {
        Kernel k = *this;
        k.scale_ *= c;
        return k;
    }

  private:
    Kernel(Variant v, double param, int degree) : variant_(v), param_(param), degree_(degree) {}
    Variant variant_;
    double param_;
    int degree_;
    double scale_ = 1.0;
};

/// Gram matrix of a kernel on an ordered point set.
RealMatrix gram_matrix(const Kernel& k, const std::vector<double>& points);

/// Per-observable Gram data: the multiplicity-stretched q x q Gram K_i and
/// the squared-kernel Gram Omega_i on the q_i distinct eigenvalues.
struct GramPair {
    RealMatrix stretched;  // K_i, q x q
    RealMatrix squared;    // Omega_i, q_i x q_i

    static GramPair build(const Kernel& k, const SpectralDecomp& obs);
};

/// PSD square root via symmetric eigendecomposition; eigenvalues below
/// -1e-9 * max are rejected, small negatives are clipped at zero.
RealMatrix psd_sqrt(const RealMatrix& m);
Matrix psd_sqrt(const Matrix& m);

/// Embedding discrepancy |K_i^{1/2} Diag(d - p) K_i^{1/2}|_s between the
/// multiplicity-stretched expectation and frequency rows.
double qce_discrepancy(const GramPair& gram, const RealVector& d_row, const RealVector& p_row,
                       double s);

/// Conditional QMD closed forms.  Qubit Gram matrices are indexed by the
/// outcome order (+1, -1), matching Diag(1, -1) as the outcome contrast.
/// Pauli axes are 0 -> x, 1 -> y, 2 -> z.
double qmd_pauli(int axis_i, int axis_j, const DensityMatrix& rho, const Matrix& gram);

double qmd_bitflip(const SpectralDecomp& obs, double eta, const DensityMatrix& rho,
                   const Matrix& gram);

struct QmdTwoNoisyResult {
    double value = 0.0;
    double bound = 0.0;
    std::optional<std::pair<DensityMatrix, DensityMatrix>> maximizers;
};

QmdTwoNoisyResult qmd_two_noisy(const SpectralDecomp& obs_a, const SpectralDecomp& obs_b,
                                double eta_a, double eta_b, const DensityMatrix& rho,
                                const Matrix& gram);

struct QmdModularResult {
    double value = 0.0;
    double bound = 0.0;
    int argmax_index = 0;
};

QmdModularResult qmd_modular(const SpectralDecomp& number_obs, const RealVector& eta,
                             const DensityMatrix& rho, const Matrix& gram);

/// Oracle-only paths: embedding discrepancy computed directly from Born
/// probabilities of two POVMs sharing an outcome set, and its maximization
/// over a pure-state mesh (Fibonacci sphere; qubits only).
double brute_qmd_value(const Povm& povm_a, const Povm& povm_b, const Matrix& gram, double s,
                       const DensityMatrix& rho);

struct BruteQmdResult {
    double value = 0.0;
    Eigen::Vector3d argmax_bloch = Eigen::Vector3d::Zero();
};

BruteQmdResult brute_qmd_pure_search(const Povm& povm_a, const Povm& povm_b, const Matrix& gram,
                                     double s, int mesh_points = 10000);

}  // namespace qst
