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

#include "qst/psd_projection.hpp"

#include <cmath>

namespace qst {

namespace {

// Kahan-compensated running sum.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

RealVector spta(const RealVector& a) {
    const int q = static_cast<int>(a.size());
    if (q == 0) throw ArgumentError("spta: empty input");
    for (int i = 0; i + 1 < q; ++i) {
        if (a(i) < a(i + 1)) throw ArgumentError("spta: input must be non-increasing");
    }
    {
        KahanSum total;
        for (int i = 0; i < q; ++i) total.add(a(i));
        if (!(total.sum > 0.0)) throw ArgumentError("spta: input must have positive sum");
    }
    if (a(q - 1) >= 0.0) return a;

    // Phase 1: accumulate the non-positive tail
    KahanSum tail;
    int k = q - 1;
    while (k >= 0 && a(k) <= 0.0) {
        tail.add(a(k));
        --k;
    }
    // Phase 2: extend the tail until (k+1) a_k + tail >= 0
    while (k >= 0 && (k + 1) * a(k) + tail.sum < 0.0) {
        tail.add(a(k));
        --k;
    }
    const int t = k + 1;  // truncation index (count of surviving entries)
    const double shift = tail.sum / t;
    RealVector b = RealVector::Zero(q);
    for (int i = 0; i < t; ++i) b(i) = a(i) + shift;
    return b;
}

HermMat trace_preserving_projection(const HermMat& s) {
    if (!(s.trace() > 0.0)) {
        throw ArgumentError("trace_preserving_projection: trace must be positive");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s.mat());
    if (solver.info() != Eigen::Success) {
        throw DecompositionFailure("trace_preserving_projection: eigensolver did not converge");
    }
    const int q = s.dim();
    RealVector desc(q);
    for (int i = 0; i < q; ++i) desc(i) = solver.eigenvalues()(q - 1 - i);
    const RealVector b = spta(desc);

    Matrix out = Matrix::Zero(q, q);
    for (int i = 0; i < q; ++i) {
        if (b(i) == 0.0) continue;
        const auto v = solver.eigenvectors().col(q - 1 - i);
        out += b(i) * v * v.adjoint();
    }
    if (s.field() == FieldTag::Real) out = out.real().cast<Complex>();
    return HermMat(s.field(), std::move(out));
}

DensityMatrix project_to_density(const HermMat& s) {
    return DensityMatrix(trace_preserving_projection(s));
}

}  // namespace qst
