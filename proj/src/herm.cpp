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

#include "qst/herm.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace qst {

namespace {
constexpr double kAsymTol = 1e-8;
}

HermMat::HermMat(FieldTag field, Matrix entries) : field_(field), mat_(std::move(entries)) {
    if (mat_.rows() != mat_.cols()) {
        throw ShapeError("HermMat: matrix must be square");
    }
    const double scale = 1.0 + mat_.cwiseAbs().maxCoeff();
    const double asym = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kAsymTol * scale) {
        throw ArgumentError("HermMat: input is not self-adjoint (relative asymmetry " +
                            std::to_string(asym / scale) + ")");
    }
    if (field_ == FieldTag::Real) {
        const double im = mat_.imag().cwiseAbs().maxCoeff();
        if (im > kAsymTol * scale) {
            throw ArgumentError("HermMat: complex entries in a real-field matrix");
        }
        mat_ = mat_.real().cast<Complex>();
    }
    mat_ = ((mat_ + mat_.adjoint()) / 2.0).eval();
}

HermMat HermMat::identity(FieldTag field, int q) {
    return HermMat(field, Matrix::Identity(q, q));
}

HermMat HermMat::zero(FieldTag field, int q) {
    return HermMat(field, Matrix::Zero(q, q));
}

HermMat HermMat::operator+(const HermMat& o) const { return HermMat(field_, mat_ + o.mat_); }
HermMat HermMat::operator-(const HermMat& o) const { return HermMat(field_, mat_ - o.mat_); }
HermMat HermMat::operator*(double s) const { return HermMat(field_, mat_ * s); }

double frob_inner(const HermMat& a, const HermMat& b) {
    if (a.dim() != b.dim()) throw ShapeError("frob_inner: dimension mismatch");
    return (a.mat() * b.mat()).trace().real();
}

double frob_norm(const HermMat& a) { return a.mat().norm(); }

const HermBasis& HermBasis::get(FieldTag field, int q) {
    if (q < 2) throw ArgumentError("HermBasis: q must be >= 2");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<HermBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<int>(field), q);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::unique_ptr<HermBasis>(new HermBasis(field, q))).first;
    }
    return *it->second;
}

Matrix HermBasis::element(int l) const {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (l < 0 || l >= dim_) throw ArgumentError("HermBasis::element: index out of range");
    Matrix e = Matrix::Zero(q_, q_);
    if (l == 0) {
        e = Matrix::Identity(q_, q_) / std::sqrt(static_cast<double>(q_));
        return e;
    }
    if (l <= q_ - 1) {
        // diagonal generator D_m: (1,..,1,-m,0,..)/sqrt(m(m+1))
        const int m = l;
        const double norm = 1.0 / std::sqrt(static_cast<double>(m) * (m + 1));
        for (int j = 0; j < m; ++j) e(j, j) = norm;
        e(m, m) = -static_cast<double>(m) * norm;
        return e;
    }
    // off-diagonal generators, pairs (a, b) with a < b in row-major order
    int idx = l - q_;
    const int per_pair = field_ == FieldTag::Complex ? 2 : 1;
    const int pair = idx / per_pair;
    const int kind = idx % per_pair;
    int a = 0, b = 0, c = pair;
    for (a = 0; a < q_; ++a) {
        const int row = q_ - 1 - a;
        if (c < row) {
            b = a + 1 + c;
            break;
        }
        c -= row;
    }
    if (kind == 0) {
        e(a, b) = inv_sqrt2;
        e(b, a) = inv_sqrt2;
    } else {
        e(a, b) = Complex(0.0, -inv_sqrt2);
        e(b, a) = Complex(0.0, inv_sqrt2);
    }
    return e;
}

RealVector HermBasis::vectorize(const Matrix& s) const {
    if (s.rows() != q_ || s.cols() != q_) throw ShapeError("vectorize: dimension mismatch");
    const double sqrt2 = std::sqrt(2.0);
    RealVector c(dim_);
    c(0) = s.trace().real() / std::sqrt(static_cast<double>(q_));
    double partial = 0.0;
    for (int m = 1; m <= q_ - 1; ++m) {
        partial += s(m - 1, m - 1).real();
        const double norm = 1.0 / std::sqrt(static_cast<double>(m) * (m + 1));
        c(m) = norm * (partial - m * s(m, m).real());
    }
    int l = q_;
    for (int a = 0; a < q_; ++a) {
        for (int b = a + 1; b < q_; ++b) {
            c(l++) = sqrt2 * s(a, b).real();
            if (field_ == FieldTag::Complex) c(l++) = -sqrt2 * s(a, b).imag();
        }
    }
    return c;
}

RealVector HermBasis::vectorize(const HermMat& s) const {
    if (s.field() != field_) throw ShapeError("vectorize: field mismatch");
    return vectorize(s.mat());
}

HermMat HermBasis::devectorize(const RealVector& coords) const {
    if (coords.size() != dim_) throw ShapeError("devectorize: coordinate length mismatch");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Matrix s = Matrix::Identity(q_, q_) * (coords(0) / std::sqrt(static_cast<double>(q_)));
    for (int m = 1; m <= q_ - 1; ++m) {
        const double norm = coords(m) / std::sqrt(static_cast<double>(m) * (m + 1));
        for (int j = 0; j < m; ++j) s(j, j) += norm;
        s(m, m) -= m * norm;
    }
    int l = q_;
    for (int a = 0; a < q_; ++a) {
        for (int b = a + 1; b < q_; ++b) {
            Complex off(coords(l++) * inv_sqrt2, 0.0);
            if (field_ == FieldTag::Complex) off.imag(-coords(l++) * inv_sqrt2);
            s(a, b) += off;
            s(b, a) += std::conj(off);
        }
    }
    return HermMat(field_, std::move(s));
}

Matrix SpectralDecomp::to_matrix() const {
    Matrix m = Matrix::Zero(q, q);
    for (int k = 0; k < num_distinct(); ++k) m += eigs[k] * projectors[k];
    return m;
}

SpectralDecomp spectral(const HermMat& m, double cluster_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
    if (solver.info() != Eigen::Success) {
        throw DecompositionFailure("spectral: eigensolver did not converge");
    }
    const RealVector& vals = solver.eigenvalues();  // ascending
    const Matrix& vecs = solver.eigenvectors();
    const int q = m.dim();
    const double gap = cluster_tol * (1.0 + vals.cwiseAbs().maxCoeff());

    SpectralDecomp d;
    d.field = m.field();
    d.q = q;
    int start = 0;
    while (start < q) {
        int end = start + 1;
        while (end < q && vals(end) - vals(end - 1) <= gap) ++end;
        Matrix proj = Matrix::Zero(q, q);
        double lambda = 0.0;
        for (int j = start; j < end; ++j) {
            proj += vecs.col(j) * vecs.col(j).adjoint();
            lambda += vals(j);
        }
        if (m.field() == FieldTag::Real) proj = proj.real().cast<Complex>();
        d.eigs.push_back(lambda / (end - start));
        d.projectors.push_back(std::move(proj));
        d.mults.push_back(end - start);
        start = end;
    }
    return d;
}

std::pair<double, HermMat> trace_center(const HermMat& s) {
    const double omega = s.trace();
    const int q = s.dim();
    Matrix delta = s.mat() - (omega / q) * Matrix::Identity(q, q);
    return {omega, HermMat(s.field(), std::move(delta))};
}

double schatten_norm(const Matrix& herm, double s) {
    if (!(s >= 1.0)) throw ArgumentError("schatten_norm: order must satisfy s >= 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw DecompositionFailure("schatten_norm: eigensolver did not converge");
    }
    const RealVector abs_eigs = solver.eigenvalues().cwiseAbs();
    if (std::isinf(s)) return abs_eigs.maxCoeff();
    if (s == 1.0) return abs_eigs.sum();
    if (s == 2.0) return std::sqrt(abs_eigs.squaredNorm());
    double acc = 0.0;
    for (int i = 0; i < abs_eigs.size(); ++i) acc += std::pow(abs_eigs(i), s);
    return std::pow(acc, 1.0 / s);
}

double schatten_norm(const HermMat& m, double s) { return schatten_norm(m.mat(), s); }

}  // namespace qst
