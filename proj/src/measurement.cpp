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

#include "qst/measurement.hpp"

#include <cmath>

namespace qst {

namespace {
constexpr double kPsdFloor = -1e-10;
constexpr double kDriftTol = 1e-9;
}  // namespace

DensityMatrix::DensityMatrix(HermMat mat) : mat_(std::move(mat)) {
    if (std::abs(mat_.trace() - 1.0) > 1e-10) {
        throw NotAState("DensityMatrix: trace must equal 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_.mat(), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < kPsdFloor) {
        throw NotAState("DensityMatrix: negative eigenvalue " +
                        std::to_string(solver.eigenvalues().minCoeff()));
    }
}

void Povm::validate() const {
    if (effects.empty() || effects.size() != outcomes.size()) {
        throw ShapeError("Povm: outcomes/effects size mismatch");
    }
    const int q = effects.front().dim();
    Matrix sum = Matrix::Zero(q, q);
    for (const HermMat& e : effects) {
        if (e.dim() != q) throw ShapeError("Povm: effect dimension mismatch");
        Eigen::SelfAdjointEigenSolver<Matrix> solver(e.mat(), Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < kPsdFloor) {
            throw ArgumentError("Povm: effect is not positive semi-definite");
        }
        sum += e.mat();
    }
    if ((sum - Matrix::Identity(q, q)).cwiseAbs().maxCoeff() > 1e-10) {
        throw ArgumentError("Povm: effects do not sum to identity");
    }
}

RealVector born_probs(const DensityMatrix& rho, const Povm& nu) {
    if (rho.dim() != nu.dim()) throw ShapeError("born_probs: dimension mismatch");
    const int l = nu.num_outcomes();
    RealVector p(l);
    for (int k = 0; k < l; ++k) {
        p(k) = (rho.mat() * nu.effects[k].mat()).trace().real();
    }
    double drift = 0.0;
    for (int k = 0; k < l; ++k) {
        if (p(k) < 0.0) {
            if (p(k) < kPsdFloor) {
                throw ArgumentError("born_probs: probability below the PSD clamp tolerance");
            }
            drift -= p(k);
            p(k) = 0.0;
        }
    }
    const double total = p.sum();
    if (drift > kDriftTol || std::abs(total - 1.0) > kDriftTol) {
        throw ArgumentError("born_probs: probabilities drift beyond float noise");
    }
    return p / total;
}

CountsTable::Row sample_counts(const DensityMatrix& rho, const Povm& nu, std::int64_t shots,
                               Rng& rng) {
    CountsTable::Row row;
    const RealVector probs = born_probs(rho, nu);
    row.counts = multinomial_counts(probs, shots, rng);
    row.probs = RealVector(probs.size());
    for (int k = 0; k < probs.size(); ++k) {
        row.probs(k) = static_cast<double>(row.counts[k]) / static_cast<double>(shots);
    }
    return row;
}

Povm povm_from_spectral(const SpectralDecomp& obs) {
    Povm nu;
    nu.outcomes = obs.eigs;
    for (const Matrix& proj : obs.projectors) nu.effects.emplace_back(obs.field, proj);
    return nu;
}

namespace {

void require_pm1_spectrum(const SpectralDecomp& obs) {
    if (obs.num_distinct() != 2 || std::abs(obs.eigs[0] + 1.0) > 1e-9 ||
        std::abs(obs.eigs[1] - 1.0) > 1e-9) {
        throw SpectrumError("observable spectrum must be {+1, -1}");
    }
}

}  // namespace

Povm bitflip_povm(const SpectralDecomp& obs, double eta) {
    require_pm1_spectrum(obs);
    if (eta < 0.0 || eta > 1.0) throw ArgumentError("bitflip_povm: eta must lie in [0, 1]");
    const Matrix& proj_minus = obs.projectors[0];
    const Matrix& proj_plus = obs.projectors[1];
    Povm nu;
    nu.outcomes = {1.0, -1.0};
    nu.effects.emplace_back(obs.field, (1.0 - eta) * proj_plus + eta * proj_minus);
    nu.effects.emplace_back(obs.field, eta * proj_plus + (1.0 - eta) * proj_minus);
    return nu;
}

Povm modular_noise_povm(const SpectralDecomp& number_obs, const RealVector& eta) {
    const int q = number_obs.q;
    if (eta.size() != q) throw DistributionError("modular_noise_povm: eta length must equal q");
    if (eta.minCoeff() < 0.0 || std::abs(eta.sum() - 1.0) > 1e-10) {
        throw DistributionError("modular_noise_povm: eta must be a probability distribution");
    }
    if (number_obs.num_distinct() != q) {
        throw SpectrumError("modular_noise_povm: number observable must have rank-1 projections");
    }
    for (int k = 0; k < q; ++k) {
        if (std::abs(number_obs.eigs[k] - k) > 1e-9) {
            throw SpectrumError("modular_noise_povm: spectrum must be {0, 1, ..., q-1}");
        }
    }
    Povm nu;
    for (int j = 0; j < q; ++j) {
        Matrix effect = Matrix::Zero(q, q);
        for (int k = 0; k < q; ++k) {
            effect += eta(((j - k) % q + q) % q) * number_obs.projectors[k];
        }
        nu.outcomes.push_back(static_cast<double>(j));
        nu.effects.emplace_back(number_obs.field, std::move(effect));
    }
    return nu;
}

DensityMatrix bloch_to_density(const Eigen::Vector3d& a) {
    if (a.norm() > 1.0 + 1e-10) throw NotAState("bloch_to_density: |a| exceeds 1");
    Matrix rho = 0.5 * (Matrix::Identity(2, 2) + a.x() * pauli_x() + a.y() * pauli_y() +
                        a.z() * pauli_z());
    return DensityMatrix(HermMat(FieldTag::Complex, std::move(rho)));
}

Eigen::Vector3d density_to_bloch(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw ShapeError("density_to_bloch: qubit only");
    Eigen::Vector3d a;
    a.x() = (rho.mat() * pauli_x()).trace().real();
    a.y() = (rho.mat() * pauli_y()).trace().real();
    a.z() = (rho.mat() * pauli_z()).trace().real();
    return a;
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix pauli(int axis) {
    switch (axis) {
        case 0: return pauli_x();
        case 1: return pauli_y();
        case 2: return pauli_z();
        default: throw ArgumentError("pauli: axis must be 0, 1 or 2");
    }
}

}  // namespace qst
