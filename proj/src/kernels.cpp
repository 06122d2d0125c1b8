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

#include "qst/kernels.hpp"

#include <cmath>

namespace qst {

Kernel Kernel::gaussian(double bandwidth) {
    if (bandwidth <= 0.0) throw ArgumentError("Kernel::gaussian: bandwidth must be positive");
    return Kernel(Variant::Gaussian, bandwidth, 0);
}

Kernel Kernel::polynomial(int degree, double offset) {
    if (degree < 1) throw ArgumentError("Kernel::polynomial: degree must be >= 1");
    return Kernel(Variant::Polynomial, offset, degree);
}

double Kernel::operator()(double x, double y) const {
    double v = 0.0;
    switch (variant_) {
        case Variant::ZeroOne: v = x == y ? 1.0 : 0.0; break;
        case Variant::Gaussian: v = std::exp(-param_ * (x - y) * (x - y)); break;
        case Variant::Polynomial: v = std::pow(param_ + x * y, degree_); break;
    }
    return scale_ * v;
}

RealMatrix gram_matrix(const Kernel& k, const std::vector<double>& points) {
    const int n = static_cast<int>(points.size());
    RealMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = k(points[i], points[j]);
    }
    return g;
}

GramPair GramPair::build(const Kernel& k, const SpectralDecomp& obs) {
    GramPair pair;
    const int q = obs.q;
    const int l = obs.num_distinct();
    pair.squared.resize(l, l);
    for (int a = 0; a < l; ++a) {
        for (int b = 0; b < l; ++b) {
            const double v = k(obs.eigs[a], obs.eigs[b]);
            pair.squared(a, b) = v * v;
        }
    }
    // stretched index: eigenvalue of eigenspace k repeated m_k times
    std::vector<double> stretched_eigs;
    stretched_eigs.reserve(q);
    for (int a = 0; a < l; ++a) {
        for (int rep = 0; rep < obs.mults[a]; ++rep) stretched_eigs.push_back(obs.eigs[a]);
    }
    pair.stretched = gram_matrix(k, stretched_eigs);
    return pair;
}

RealMatrix psd_sqrt(const RealMatrix& m) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m);
    RealVector vals = solver.eigenvalues();
    const double floor = -1e-9 * std::max(1.0, vals.cwiseAbs().maxCoeff());
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) < floor) throw ArgumentError("psd_sqrt: matrix is not positive semi-definite");
        vals(i) = std::sqrt(std::max(0.0, vals(i)));
    }
    return solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().transpose();
}

Matrix psd_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    RealVector vals = solver.eigenvalues();
    const double floor = -1e-9 * std::max(1.0, vals.cwiseAbs().maxCoeff());
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) < floor) throw ArgumentError("psd_sqrt: matrix is not positive semi-definite");
        vals(i) = std::sqrt(std::max(0.0, vals(i)));
    }
    return solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().adjoint();
}

double qce_discrepancy(const GramPair& gram, const RealVector& d_row, const RealVector& p_row,
                       double s) {
    const int q = static_cast<int>(gram.stretched.rows());
    if (d_row.size() != q || p_row.size() != q) {
        throw ShapeError("qce_discrepancy: rows must have the stretched length q");
    }
    const RealMatrix root = psd_sqrt(gram.stretched);
    const RealMatrix mid = root * (d_row - p_row).asDiagonal() * root;
    return schatten_norm(mid.cast<Complex>().eval(), s);
}

namespace {

double contrast_norm(const Matrix& gram) {
    if (gram.rows() != 2 || gram.cols() != 2) {
        throw ShapeError("qubit QMD: Gram matrix must be 2x2 on outcomes (+1, -1)");
    }
    const Matrix root = psd_sqrt(gram);
    return schatten_norm(Matrix(root * pauli_z() * root), kSchattenInf);
}

void require_pm1(const SpectralDecomp& obs) {
    if (obs.q != 2 || obs.num_distinct() != 2 || std::abs(obs.eigs[0] + 1.0) > 1e-9 ||
        std::abs(obs.eigs[1] - 1.0) > 1e-9) {
        throw SpectrumError("QMD: observable spectrum must be {+1, -1} on a qubit");
    }
}

// Bloch vector of a traceless +/-1 observable O = u . sigma.
Eigen::Vector3d bloch_axis(const SpectralDecomp& obs) {
    const Matrix o = obs.to_matrix();
    return {(o * pauli_x()).trace().real() / 2.0, (o * pauli_y()).trace().real() / 2.0,
            (o * pauli_z()).trace().real() / 2.0};
}

}  // namespace

double qmd_pauli(int axis_i, int axis_j, const DensityMatrix& rho, const Matrix& gram) {
    if (axis_i == axis_j) throw ArgumentError("qmd_pauli: axes must differ");
    const double tr = (rho.mat() * (pauli(axis_i) - pauli(axis_j))).trace().real();
    return 0.5 * contrast_norm(gram) * std::abs(tr);
}

double qmd_bitflip(const SpectralDecomp& obs, double eta, const DensityMatrix& rho,
                   const Matrix& gram) {
    require_pm1(obs);
    const double tr = (rho.mat() * obs.to_matrix()).trace().real();
    return eta * contrast_norm(gram) * std::abs(tr);
}

QmdTwoNoisyResult qmd_two_noisy(const SpectralDecomp& obs_a, const SpectralDecomp& obs_b,
                                double eta_a, double eta_b, const DensityMatrix& rho,
                                const Matrix& gram) {
    require_pm1(obs_a);
    require_pm1(obs_b);
    QmdTwoNoisyResult res;
    const double norm = contrast_norm(gram);
    const Matrix diff =
        (1.0 - 2.0 * eta_a) * obs_a.to_matrix() - (1.0 - 2.0 * eta_b) * obs_b.to_matrix();
    res.value = norm * std::abs((rho.mat() * diff).trace().real()) / 2.0;

    const Eigen::Vector3d v =
        (1.0 - 2.0 * eta_a) * bloch_axis(obs_a) - (1.0 - 2.0 * eta_b) * bloch_axis(obs_b);
    res.bound = norm * v.norm() / 2.0;
    if (v.norm() > 1e-14) {
        const Eigen::Vector3d vhat = v / v.norm();
        res.maximizers = std::make_pair(bloch_to_density(vhat), bloch_to_density(-vhat));
    }
    return res;
}

QmdModularResult qmd_modular(const SpectralDecomp& number_obs, const RealVector& eta,
                             const DensityMatrix& rho, const Matrix& gram) {
    const int q = number_obs.q;
    if (eta.size() != q || eta.minCoeff() < 0.0 || std::abs(eta.sum() - 1.0) > 1e-10) {
        throw DistributionError("qmd_modular: eta must be a distribution of length q");
    }
    if (gram.rows() != q || gram.cols() != q) {
        throw ShapeError("qmd_modular: Gram matrix must be q x q on outcomes Z_q");
    }
    if (number_obs.num_distinct() != q) {
        throw SpectrumError("qmd_modular: number observable must be non-degenerate");
    }
    const Matrix root = psd_sqrt(gram);
    QmdModularResult res;

    RealVector p(q);
    for (int k = 0; k < q; ++k) {
        p(k) = (rho.mat() * number_obs.projectors[k]).trace().real();
    }
    // [E_k]_jj = delta_jk - eta_{(j-k) mod q}; sum_k p_k E_k = Diag(p - eta * p)
    Matrix weighted = Matrix::Zero(q, q);
    double best = -1.0;
    for (int k = 0; k < q; ++k) {
        RealVector ek = RealVector::Zero(q);
        for (int j = 0; j < q; ++j) {
            ek(j) = (j == k ? 1.0 : 0.0) - eta(((j - k) % q + q) % q);
        }
        const Matrix sandwich = root * ek.asDiagonal() * root;
        const double norm = schatten_norm(sandwich, kSchattenInf);
        if (norm > best) {
            best = norm;
            res.argmax_index = k;
        }
        weighted += p(k) * sandwich;
    }
    res.value = schatten_norm(weighted, kSchattenInf);
    res.bound = best;
    return res;
}

double brute_qmd_value(const Povm& povm_a, const Povm& povm_b, const Matrix& gram, double s,
                       const DensityMatrix& rho) {
    if (povm_a.num_outcomes() != povm_b.num_outcomes() ||
        povm_a.outcomes != povm_b.outcomes) {
        throw ShapeError("brute_qmd_value: POVMs must share an outcome set");
    }
    if (gram.rows() != povm_a.num_outcomes()) {
        throw ShapeError("brute_qmd_value: Gram size must match the outcome count");
    }
    const Matrix root = psd_sqrt(gram);
    const RealVector delta = born_probs(rho, povm_a) - born_probs(rho, povm_b);
    return schatten_norm(Matrix(root * delta.asDiagonal() * root), s);
}

BruteQmdResult brute_qmd_pure_search(const Povm& povm_a, const Povm& povm_b, const Matrix& gram,
                                     double s, int mesh_points) {
    if (povm_a.dim() != 2) {
        throw NotImplementedError("brute_qmd_pure_search: default mesh covers qubits only");
    }
    BruteQmdResult res;
    for (const Eigen::Vector3d& a : fibonacci_sphere(mesh_points)) {
        const DensityMatrix rho = bloch_to_density(a);
        const double v = brute_qmd_value(povm_a, povm_b, gram, s, rho);
        if (v > res.value) {
            res.value = v;
            res.argmax_bloch = a;
        }
    }
    return res;
}

}  // namespace qst
