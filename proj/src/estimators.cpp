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

#include "qst/estimators.hpp"

#include <cmath>

namespace qst {

namespace {
constexpr int kDenseCap = 4096;  // largest D_sa for dense superoperator paths
}

LseResult lse_fit(const Design& d, const CountsTable& counts, const LseOptions& opts) {
    const HermBasis& basis = d.basis();
    const int n = d.size();
    const int q = d.q();
    const RealMatrix data = counts_to_data_matrix(d, counts);
    const HermMat target = design_adjoint(d, data) * (1.0 / n);  // D*P / n

    LseResult res{HermMat::zero(d.field(), q), 0.0, false, 0};

    double alpha = 0.0;
    bool closed_form = false;
    if (opts.assume_alpha) {
        alpha = *opts.assume_alpha;
        closed_form = true;
    } else {
        if (basis.size() > kDenseCap) {
            throw Unsupported(
                "lse_fit: D_sa exceeds the dense cap; pass LseOptions::assume_alpha for a "
                "verified unitary design");
        }
        const UnitaryDesignReport rep = check_unitary_design(d, opts.unitary_tol);
        if (rep.is_unitary) {
            alpha = rep.alpha_theory;
            closed_form = true;
        }
    }

    if (closed_form) {
        Matrix rho = target.mat() / alpha -
                     ((1.0 - alpha) / alpha / q) * Matrix::Identity(q, q);
        res.rho_hat = HermMat(d.field(), std::move(rho));
        res.used_closed_form = true;
    } else {
        const SuperOp& g = d.gram_superop();
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g.matrix);
        const RealVector& vals = solver.eigenvalues();
        const double cutoff = opts.pinv_cutoff * vals.cwiseAbs().maxCoeff();
        RealVector inv(vals.size());
        for (int i = 0; i < vals.size(); ++i) {
            if (vals(i) > cutoff) {
                inv(i) = 1.0 / vals(i);
            } else {
                inv(i) = 0.0;
                ++res.null_space_dim;
            }
        }
        const RealVector b = basis.vectorize(target);
        const RealVector x =
            solver.eigenvectors() * (inv.asDiagonal() * (solver.eigenvectors().transpose() * b));
        res.rho_hat = basis.devectorize(x);
    }
    res.loss = design_loss(d, res.rho_hat, data);
    return res;
}

double lse_mse_theory(FieldTag field, int q, double purity, int n, std::int64_t r) {
    const double a = alpha_q(field, q);
    return 1.0 / (n * static_cast<double>(r) * a * a) *
           ((1.0 - 1.0 / q) - a * (purity - 1.0 / q));
}

double lse_mse_theory(const Design& d, const DensityMatrix& rho, int n, std::int64_t r) {
    if (!d.rank_one()) {
        throw Inapplicable("lse_mse_theory: closed form requires rank-1 eigenprojections");
    }
    const UnitaryDesignReport rep = check_unitary_design(d);
    if (!rep.is_unitary) {
        throw Inapplicable("lse_mse_theory: design is not a verified unitary design");
    }
    return lse_mse_theory(d.field(), d.q(), rho.purity(), n, r);
}

QuarkOperators quark_operators(const Design& d, const Kernel& k, const CountsTable& counts,
                               bool require_invertible) {
    const HermBasis& basis = d.basis();
    if (basis.size() > kDenseCap) {
        throw Unsupported("quark_operators: D_sa exceeds the dense superoperator cap");
    }
    if (counts.num_observables() != d.size()) {
        throw ShapeError("quark_operators: counts shape mismatch");
    }
    const int n = d.size();
    const int dsa = basis.size();

    std::vector<RealMatrix> proj_vecs(n);
    std::vector<RealMatrix> m_vecs(n);
    RealMatrix h = RealMatrix::Zero(dsa, dsa);
    RealVector pk = RealVector::Zero(dsa);
    for (int i = 0; i < n; ++i) {
        const SpectralDecomp& o = d.observable(i);
        const int l = o.num_distinct();
        GramPair gram = GramPair::build(k, o);

        Eigen::SelfAdjointEigenSolver<RealMatrix> omega_eigs(gram.squared, Eigen::EigenvaluesOnly);
        const double floor = 1e-10 * gram.squared.diagonal().maxCoeff();
        if (omega_eigs.eigenvalues().minCoeff() <= floor) {
            throw KernelNotPD("quark_operators: squared kernel is singular on the spectrum of "
                              "observable " + std::to_string(i));
        }

        RealMatrix vp(dsa, l);
        for (int kk = 0; kk < l; ++kk) vp.col(kk) = basis.vectorize(o.projectors[kk]);
        RealMatrix vm = vp * gram.squared;  // columns vec(M_ik)
        h.noalias() += vm * vp.transpose();
        if (counts.rows[i].probs.size() != l) {
            throw ShapeError("quark_operators: outcome count mismatch");
        }
        pk.noalias() += vm * counts.rows[i].probs;
        proj_vecs[i] = std::move(vp);
        m_vecs[i] = std::move(vm);
    }
    h /= n;
    pk /= n;

    Eigen::SelfAdjointEigenSolver<RealMatrix> h_eigs(h, Eigen::EigenvaluesOnly);
    const double lo = h_eigs.eigenvalues().minCoeff();
    const double hi = h_eigs.eigenvalues().maxCoeff();
    const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (require_invertible && !(condition <= 1e12)) {
        throw IllConditioned("quark_operators: kernel Gram superoperator condition " +
                             std::to_string(condition));
    }

    RealMatrix centered;
    if (condition <= 1e12) {
        // A_K = H^{-1} - H^{-1} e e^T H^{-1} / (e^T H^{-1} e), e = vec(I)
        const RealVector e = basis.vectorize(HermMat::identity(d.field(), d.q()));
        Eigen::LDLT<RealMatrix> ldlt(h);
        RealMatrix hinv = ldlt.solve(RealMatrix::Identity(dsa, dsa));
        const RealVector he = ldlt.solve(e);
        centered = hinv - (he * he.transpose()) / e.dot(he);
    }

    return QuarkOperators{d.field(),        d.q(),
                          n,                SuperOp{std::move(h)},
                          basis.devectorize(pk), SuperOp{std::move(centered)},
                          condition,        std::move(proj_vecs),
                          std::move(m_vecs)};
}

QuarkResult quark_fit(const QuarkOperators& ops) {
    if (!(ops.condition <= 1e12)) {
        throw IllConditioned("quark_fit: kernel Gram superoperator condition " +
                             std::to_string(ops.condition));
    }
    const HermBasis& basis = HermBasis::get(ops.field, ops.q);
    const RealVector e = basis.vectorize(HermMat::identity(ops.field, ops.q));
    Eigen::LDLT<RealMatrix> ldlt(ops.h.matrix);
    const RealVector y1 = ldlt.solve(basis.vectorize(ops.p_k));
    const RealVector y2 = ldlt.solve(e);
    const double tr1 = y1.dot(e);
    const double tr2 = y2.dot(e);
    QuarkResult res{basis.devectorize(y1 + ((1.0 - tr1) / tr2) * y2),
                    2.0 * (tr1 - 1.0) / tr2, ops.condition};
    return res;
}

SuperOp quark_covariance(const QuarkOperators& ops, const DensityMatrix& rho) {
    const HermBasis& basis = HermBasis::get(ops.field, ops.q);
    const RealVector rho_vec = basis.vectorize(rho.herm());
    const int dsa = basis.size();
    RealMatrix s = RealMatrix::Zero(dsa, dsa);
    for (int i = 0; i < ops.n; ++i) {
        const RealVector d_row = ops.proj_vecs[i].transpose() * rho_vec;  // d_ik[rho]
        RealVector mean = RealVector::Zero(dsa);
        for (int k = 0; k < d_row.size(); ++k) {
            const auto m_col = ops.m_vecs[i].col(k);
            s.noalias() += d_row(k) * (m_col * m_col.transpose());
            mean.noalias() += d_row(k) * m_col;
        }
        s.noalias() -= mean * mean.transpose();
    }
    s /= static_cast<double>(ops.n) * ops.n;
    return SuperOp{s};
}

SuperOp clt_covariance(const QuarkOperators& ops, const DensityMatrix& rho) {
    const RealMatrix& a = ops.centered_inverse.matrix;
    return SuperOp{a * quark_covariance(ops, rho).matrix * a};
}

ConcentrationBound concentration_bound(const QuarkOperators& ops, const DensityMatrix& rho,
                                       const HermMat& direction, double t, std::int64_t r) {
    if (!(t > 0.0)) throw ArgumentError("concentration_bound: t must be positive");
    const HermBasis& basis = HermBasis::get(ops.field, ops.q);
    const RealVector s_vec = basis.vectorize(direction);
    const SuperOp sandwich = clt_covariance(ops, rho);
    const double big_m = s_vec.dot(sandwich.matrix * s_vec);
    const double floor =
        1e-12 * sandwich.matrix.cwiseAbs().maxCoeff() * s_vec.squaredNorm();

    ConcentrationBound bound;
    bound.m2 = big_m / static_cast<double>(r);
    if (big_m <= floor) {
        // degenerate direction: the estimator never moves along it
        bound.bennett = 0.0;
        bound.bernstein = 0.0;
        return bound;
    }
    const double x = t / bound.m2;
    const double h = (1.0 + x) * std::log1p(x) - x;
    bound.bennett = std::exp(-bound.m2 * h);
    bound.bernstein = std::exp(-t * t / (2.0 * (bound.m2 + t / 3.0)));
    return bound;
}

}  // namespace qst
