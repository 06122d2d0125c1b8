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

#include "qst/rng.hpp"

#include <cmath>

#include "qst/errors.hpp"

namespace qst {

std::vector<std::int64_t> multinomial_counts(const RealVector& probs, std::int64_t shots,
                                             Rng& rng) {
    if (shots < 1) throw ArgumentError("multinomial_counts: shots must be >= 1");
    const int l = static_cast<int>(probs.size());
    std::vector<std::int64_t> counts(l, 0);
    std::int64_t remaining = shots;
    double mass = 1.0;
    for (int k = 0; k + 1 < l && remaining > 0; ++k) {
        const double p = mass > 0.0 ? std::clamp(probs(k) / mass, 0.0, 1.0) : 0.0;
        counts[k] = rng.binomial(remaining, p);
        remaining -= counts[k];
        mass -= probs(k);
    }
    counts[l - 1] = remaining;
    return counts;
}

Matrix haar_unitary(FieldTag field, int q, Rng& rng) {
    Matrix g(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            if (field == FieldTag::Complex) {
                g(i, j) = Complex(rng.gaussian(), rng.gaussian());
            } else {
                g(i, j) = Complex(rng.gaussian(), 0.0);
            }
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix qmat = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // normalize the R diagonal phases so Q follows the Haar measure
    for (int j = 0; j < q; ++j) {
        Complex d = r(j, j);
        const double a = std::abs(d);
        qmat.col(j) *= (a > 0.0 ? d / a : Complex(1.0, 0.0));
    }
    return qmat;
}

HermMat random_density(FieldTag field, const RealVector& eigenvalues, Rng& rng) {
    const int q = static_cast<int>(eigenvalues.size());
    for (int i = 0; i < q; ++i) {
        if (eigenvalues(i) < -1e-12) throw ArgumentError("random_density: negative eigenvalue");
    }
    if (std::abs(eigenvalues.sum() - 1.0) > 1e-9) {
        throw ArgumentError("random_density: eigenvalues must sum to 1");
    }
    Matrix v = haar_unitary(field, q, rng);
    Matrix rho = v * eigenvalues.asDiagonal() * v.adjoint();
    return HermMat(field, std::move(rho));
}

HermMat random_herm(FieldTag field, int q, Rng& rng) {
    const HermBasis& basis = HermBasis::get(field, q);
    RealVector coords(basis.size());
    for (int i = 0; i < coords.size(); ++i) coords(i) = rng.gaussian();
    return basis.devectorize(coords);
}

std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(n);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.emplace_back(rad * std::cos(phi), rad * std::sin(phi), z);
    }
    return pts;
}

}  // namespace qst
