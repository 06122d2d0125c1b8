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

#include "qst/design.hpp"

#include <algorithm>
#include <cmath>

#include "qst/parallel.hpp"

namespace qst {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

Design::Design(FieldTag field, int q, std::vector<SpectralDecomp> observables)
    : field_(field), q_(q), obs_(std::move(observables)), basis_(&HermBasis::get(field, q)) {
    if (obs_.empty()) throw ArgumentError("Design: empty observable collection");
    for (const SpectralDecomp& o : obs_) {
        if (o.q != q_ || o.field != field_) {
            throw ShapeError("Design: observable dimension/field mismatch");
        }
        if (o.num_distinct() < 2) {
            throw SpectrumError("Design: observable with a single eigenvalue is uninformative");
        }
    }
}

double Design::q_bar() const {
    double total = 0.0;
    for (const SpectralDecomp& o : obs_) total += o.num_distinct();
    return total / size();
}

bool Design::rank_one() const {
    for (const SpectralDecomp& o : obs_) {
        for (int m : o.mults) {
            if (m != 1) return false;
        }
    }
    return true;
}

namespace {

// Gram contribution of observables [lo, hi): sum_k vec(Pi_ik) vec(Pi_ik)^T / m_ik.
RealMatrix gram_block(const Design& d, int lo, int hi) {
    const HermBasis& basis = d.basis();
    RealMatrix acc = RealMatrix::Zero(basis.size(), basis.size());
    for (int i = lo; i < hi; ++i) {
        const SpectralDecomp& o = d.observable(i);
        for (int k = 0; k < o.num_distinct(); ++k) {
            const RealVector v = basis.vectorize(o.projectors[k]);
            acc.noalias() += (v * v.transpose()) / o.mults[k];
        }
    }
    return acc;
}

}  // namespace

const SuperOp& Design::gram_superop() const {
    if (gram_) return *gram_;
    const int n = size();
    const int dsa = basis_->size();
    // fixed block decomposition, merged in ascending order so the result is
    // identical across thread counts
    const int nblocks = std::min({n, 16, std::max(1, (1 << 26) / (dsa * dsa))});
    std::vector<RealMatrix> partials(nblocks);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (int b = 0; b < nblocks; ++b) {
        const int lo = static_cast<int>(static_cast<std::int64_t>(n) * b / nblocks);
        const int hi = static_cast<int>(static_cast<std::int64_t>(n) * (b + 1) / nblocks);
        partials[b] = gram_block(*this, lo, hi);
    }
    RealMatrix g = RealMatrix::Zero(dsa, dsa);
    for (const RealMatrix& p : partials) g += p;
    gram_ = SuperOp{g / n};
    return *gram_;
}

RealMatrix design_apply(const Design& d, const HermMat& s) {
    if (s.dim() != d.q() || s.field() != d.field()) throw ShapeError("design_apply: shape mismatch");
    const int n = d.size();
    const int q = d.q();
    RealMatrix out(n, q);
    for (int i = 0; i < n; ++i) {
        const SpectralDecomp& o = d.observable(i);
        int l = 0;
        for (int k = 0; k < o.num_distinct(); ++k) {
            const double dk = (s.mat() * o.projectors[k]).trace().real() / o.mults[k];
            for (int rep = 0; rep < o.mults[k]; ++rep) out(i, l++) = dk;
        }
    }
    return out;
}

HermMat design_adjoint(const Design& d, const RealMatrix& a) {
    if (a.rows() != d.size() || a.cols() != d.q()) throw ShapeError("design_adjoint: shape mismatch");
    Matrix acc = Matrix::Zero(d.q(), d.q());
    for (int i = 0; i < d.size(); ++i) {
        const SpectralDecomp& o = d.observable(i);
        int l = 0;
        for (int k = 0; k < o.num_distinct(); ++k) {
            double avg = 0.0;
            for (int rep = 0; rep < o.mults[k]; ++rep) avg += a(i, l++);
            avg /= o.mults[k];
            acc += avg * o.projectors[k];
        }
    }
    return HermMat(d.field(), std::move(acc));
}

RealMatrix counts_to_data_matrix(const Design& d, const CountsTable& counts) {
    if (counts.num_observables() != d.size()) {
        throw ShapeError("counts_to_data_matrix: observable count mismatch");
    }
    const int q = d.q();
    RealMatrix p(d.size(), q);
    for (int i = 0; i < d.size(); ++i) {
        const SpectralDecomp& o = d.observable(i);
        const RealVector& probs = counts.rows[i].probs;
        if (probs.size() != o.num_distinct()) {
            throw ShapeError("counts_to_data_matrix: outcome count mismatch");
        }
        int l = 0;
        for (int k = 0; k < o.num_distinct(); ++k) {
            const double v = probs(k) / o.mults[k];
            for (int rep = 0; rep < o.mults[k]; ++rep) p(i, l++) = v;
        }
    }
    return p;
}

double design_loss(const Design& d, const HermMat& s, const RealMatrix& data) {
    return (design_apply(d, s) - data).squaredNorm();
}

CompletenessReport check_complete(const Design& d, double tol) {
    const SuperOp& g = d.gram_superop();
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g.matrix, Eigen::EigenvaluesOnly);
    CompletenessReport rep;
    rep.null_space_dim = 0;
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        if (solver.eigenvalues()(i) <= tol) ++rep.null_space_dim;
    }
    rep.complete = solver.eigenvalues().minCoeff() > tol;
    return rep;
}

UnitaryDesignReport check_unitary_design(const Design& d, double tol) {
    const SuperOp& g = d.gram_superop();
    const int dsa = g.dim();
    // restriction to the traceless block: coordinates 1..D_sa-1
    RealMatrix tt = g.matrix.bottomRightCorner(dsa - 1, dsa - 1);
    UnitaryDesignReport rep;
    rep.alpha_theory = (d.q_bar() - 1.0) / (d.q() - 1.0) * alpha_q(d.field(), d.q());
    rep.alpha_hat = tt.trace() / (dsa - 1);
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(
        tt - rep.alpha_theory * RealMatrix::Identity(dsa - 1, dsa - 1), Eigen::EigenvaluesOnly);
    rep.deviation = solver.eigenvalues().cwiseAbs().maxCoeff();
    // the identity block must stay decoupled; fold any leakage into the deviation
    const double leak = g.matrix.row(0).tail(dsa - 1).cwiseAbs().maxCoeff();
    rep.deviation = std::max(rep.deviation, leak);
    rep.is_unitary = rep.deviation <= tol;
    return rep;
}

Design haar_random_design(FieldTag field, int q, int n, std::uint64_t seed,
                          const SpectralDecomp& seed_observable) {
    if (seed_observable.num_distinct() != q) {
        throw SpectrumError("haar_random_design: seed observable must have q distinct eigenvalues");
    }
    Rng rng(seed);
    std::vector<SpectralDecomp> obs;
    obs.reserve(n);
    for (int i = 0; i < n; ++i) {
        const Matrix v = haar_unitary(field, q, rng);
        SpectralDecomp o;
        o.field = field;
        o.q = q;
        o.eigs = seed_observable.eigs;
        o.mults = seed_observable.mults;
        for (const Matrix& proj : seed_observable.projectors) {
            Matrix rotated = v * proj * v.adjoint();
            if (field == FieldTag::Real) rotated = rotated.real().cast<Complex>();
            o.projectors.push_back(std::move(rotated));
        }
        obs.push_back(std::move(o));
    }
    return Design(field, q, std::move(obs));
}

Design qubit_bloch_design(const std::vector<Eigen::Vector3d>& unit_vectors) {
    std::vector<SpectralDecomp> obs;
    obs.reserve(unit_vectors.size());
    for (const Eigen::Vector3d& v : unit_vectors) {
        const double norm = v.norm();
        if (norm < 1e-14) throw DegenerateObservable("qubit_bloch_design: zero Bloch vector");
        const Eigen::Vector3d u = v / norm;
        const Matrix udots = u.x() * pauli_x() + u.y() * pauli_y() + u.z() * pauli_z();
        SpectralDecomp o;
        o.field = FieldTag::Complex;
        o.q = 2;
        o.eigs = {-1.0, 1.0};
        o.mults = {1, 1};
        o.projectors = {0.5 * (Matrix::Identity(2, 2) - udots),
                        0.5 * (Matrix::Identity(2, 2) + udots)};
        obs.push_back(std::move(o));
    }
    return Design(FieldTag::Complex, 2, std::move(obs));
}

Design rebit_angle_design(const std::vector<double>& angles) {
    std::vector<SpectralDecomp> obs;
    obs.reserve(angles.size());
    for (double theta : angles) {
        // U(theta)^T Diag(1,-1) U(theta): the +1 eigenvector is U^T e_+, so
        // that d_+ = (1 + s cos(theta_state - theta)) / 2
        const double c = std::cos(theta / 2.0);
        const double s = std::sin(theta / 2.0);
        Eigen::Vector2d eplus(c, s), eminus(-s, c);
        SpectralDecomp o;
        o.field = FieldTag::Real;
        o.q = 2;
        o.eigs = {-1.0, 1.0};
        o.mults = {1, 1};
        o.projectors = {(eminus * eminus.transpose()).cast<Complex>(),
                        (eplus * eplus.transpose()).cast<Complex>()};
        obs.push_back(std::move(o));
    }
    return Design(FieldTag::Real, 2, std::move(obs));
}

namespace {

// Eigenprojections of the local +/-1 Pauli axes; index s in {0, 1} for -\,+.
Matrix local_projector(int axis, int s) {
    const Matrix sigma = pauli(axis);
    return 0.5 * (Matrix::Identity(2, 2) + (s == 1 ? 1.0 : -1.0) * sigma);
}

}  // namespace

Design pauli_tensor_design(int k, bool include_identity_factors) {
    if (k < 1) throw ArgumentError("pauli_tensor_design: k must be >= 1");
    const int q = 1 << k;
    const int base = include_identity_factors ? 4 : 3;
    std::int64_t total = 1;
    for (int j = 0; j < k; ++j) total *= base;

    std::vector<SpectralDecomp> obs;
    for (std::int64_t code = 0; code < total; ++code) {
        // axis per qubit: 0..2 -> x,y,z ; 3 -> unmeasured slot
        std::vector<int> axes(k);
        std::int64_t c = code;
        bool all_identity = true;
        for (int j = 0; j < k; ++j) {
            int a = static_cast<int>(c % base);
            c /= base;
            if (include_identity_factors) {
                axes[j] = a == 0 ? -1 : a - 1;
            } else {
                axes[j] = a;
            }
            if (axes[j] >= 0) all_identity = false;
        }
        if (all_identity) continue;

        std::vector<int> measured;
        for (int j = 0; j < k; ++j) {
            if (axes[j] >= 0) measured.push_back(j);
        }
        const int w = static_cast<int>(measured.size());

        SpectralDecomp o;
        o.field = FieldTag::Complex;
        o.q = q;
        // outcomes: one per sign assignment on the measured qubits, labeled by
        // the signed binary value so the spectrum is distinct
        struct Entry {
            double eig;
            Matrix proj;
        };
        std::vector<Entry> entries;
        for (int bits = 0; bits < (1 << w); ++bits) {
            Matrix proj = Matrix::Identity(1, 1);
            double label = 0.0;
            for (int j = 0; j < k; ++j) {
                Matrix factor;
                if (axes[j] < 0) {
                    factor = Matrix::Identity(2, 2);
                } else {
                    int pos = static_cast<int>(std::find(measured.begin(), measured.end(), j) -
                                               measured.begin());
                    const int s = (bits >> pos) & 1;
                    factor = local_projector(axes[j], s);
                    label += (s == 1 ? 1.0 : -1.0) * static_cast<double>(1 << pos);
                }
                proj = kron(proj, factor);
            }
            entries.push_back({label, std::move(proj)});
        }
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.eig < b.eig; });
        for (Entry& e : entries) {
            o.eigs.push_back(e.eig);
            o.mults.push_back(1 << (k - w));
            o.projectors.push_back(std::move(e.proj));
        }
        obs.push_back(std::move(o));
    }
    return Design(FieldTag::Complex, q, std::move(obs));
}

namespace reference {

SuperOp gram_superop_serial(const Design& d) {
    const int n = d.size();
    const int dsa = d.basis().size();
    // same fixed block decomposition as the parallel path, computed on one
    // thread, so the two agree bitwise
    const int nblocks = std::min({n, 16, std::max(1, (1 << 26) / (dsa * dsa))});
    RealMatrix g = RealMatrix::Zero(dsa, dsa);
    for (int b = 0; b < nblocks; ++b) {
        const int lo = static_cast<int>(static_cast<std::int64_t>(n) * b / nblocks);
        const int hi = static_cast<int>(static_cast<std::int64_t>(n) * (b + 1) / nblocks);
        g += gram_block(d, lo, hi);
    }
    return SuperOp{g / n};
}

}  // namespace reference

}  // namespace qst
