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

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qst/errors.hpp"
#include "qst/field.hpp"

namespace qst {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Self-adjoint matrix over F_sa^{q x q}.  The constructor symmetrizes
/// M <- (M + M*)/2 silently; relative asymmetry beyond 1e-8 is rejected.
/// For the real field, imaginary parts must vanish to the same tolerance.
class HermMat {
  public:
    HermMat(FieldTag field, Matrix entries);

    static HermMat identity(FieldTag field, int q);
    static HermMat zero(FieldTag field, int q);

    int dim() const { return static_cast<int>(mat_.rows()); }
    FieldTag field() const { return field_; }
    const Matrix& mat() const { return mat_; }

    double trace() const { return mat_.trace().real(); }

    HermMat operator+(const HermMat& o) const;
    HermMat operator-(const HermMat& o) const;
    HermMat operator*(double s) const;

  private:
    FieldTag field_;
    Matrix mat_;
};

/// Frobenius (Hilbert-Schmidt) inner product <A, B> = tr(A B); real for
/// self-adjoint arguments.
double frob_inner(const HermMat& a, const HermMat& b);
double frob_norm(const HermMat& a);

/// Orthonormal basis of F_sa^{q x q}: I/sqrt(q) first, then the traceless
/// generalized Gell-Mann family in a fixed documented order (diagonal
/// generators, then for each index pair a<b in row-major order the symmetric
/// generator followed by the antisymmetric one when field == Complex).
/// Cached per (field, q); provides the coordinate maps used by every
/// superoperator in the toolkit.
class HermBasis {
  public:
    static const HermBasis& get(FieldTag field, int q);

    int q() const { return q_; }
    FieldTag field() const { return field_; }
    int size() const { return dim_; }

    /// Dense basis element E_l (materialized lazily on first access).
    Matrix element(int l) const;

    /// Coordinates of S in the basis; a linear isometry onto R^{D_sa}.
    RealVector vectorize(const HermMat& s) const;
    RealVector vectorize(const Matrix& s) const;
    HermMat devectorize(const RealVector& coords) const;

  private:
    HermBasis(FieldTag field, int q) : field_(field), q_(q), dim_(herm_dim(field, q)) {}
    FieldTag field_;
    int q_;
    int dim_;
};

/// Spectral decomposition with degenerate eigenvalues merged: ascending
/// distinct eigenvalues, their eigenprojections and multiplicities.
struct SpectralDecomp {
    FieldTag field;
    int q = 0;
    std::vector<double> eigs;        // ascending, distinct
    std::vector<Matrix> projectors;  // Pi_k, idempotent, sum to I
    std::vector<int> mults;          // tr Pi_k

    int num_distinct() const { return static_cast<int>(eigs.size()); }

    /// Reassembled matrix sum_k eig_k Pi_k.
    Matrix to_matrix() const;
};

/// Eigendecomposition of M with eigenvalue clustering: eigenvalues within
/// cluster_tol * (1 + |M|_inf) of each other collapse into a single
/// eigenprojection.
SpectralDecomp spectral(const HermMat& m, double cluster_tol = 1e-9);

/// Trace-centering split S = omega * I/q + Delta with tr Delta = 0.
std::pair<double, HermMat> trace_center(const HermMat& s);

/// Schatten s-norm (s >= 1, or infinity) of a self-adjoint matrix.
double schatten_norm(const HermMat& m, double s);
double schatten_norm(const Matrix& herm, double s);

constexpr double kSchattenInf = std::numeric_limits<double>::infinity();

}  // namespace qst
