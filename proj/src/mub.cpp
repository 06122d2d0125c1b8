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

#include "qst/mub.hpp"

#include <bit>
#include <cmath>

#include "qst/parallel.hpp"

namespace qst {

void fwht(double* data, int length) {
    if (length <= 0 || (length & (length - 1)) != 0) {
        throw ShapeError("fwht: length must be a power of two");
    }
    for (int h = 1; h < length; h <<= 1) {
        for (int base = 0; base < length; base += h << 1) {
            for (int j = base; j < base + h; ++j) {
                const double u = data[j];
                const double v = data[j + h];
                data[j] = u + v;
                data[j + h] = u - v;
            }
        }
    }
}

void fwht(RealVector& data) { fwht(data.data(), static_cast<int>(data.size())); }

void fwht_complex(Complex* data, int length) {
    if (length <= 0 || (length & (length - 1)) != 0) {
        throw ShapeError("fwht: length must be a power of two");
    }
    for (int h = 1; h < length; h <<= 1) {
        for (int base = 0; base < length; base += h << 1) {
            for (int j = base; j < base + h; ++j) {
                const Complex u = data[j];
                const Complex v = data[j + h];
                data[j] = u + v;
                data[j + h] = u - v;
            }
        }
    }
}

namespace {

inline int dot2(std::uint32_t a, std::uint32_t b) { return std::popcount(a & b) & 1; }

// Phase product rule for physical Pauli operators: P_u P_v = i^e P_{u+v} with
// e = a.b + c.d - (a^c).(b^d) + 2 (b.c) (mod 4), u = (a|b), v = (c|d), where
// the dot products are integer overlaps.
int product_phase_exponent(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
    const int e = std::popcount(a & b) + std::popcount(c & d) -
                  std::popcount((a ^ c) & (b ^ d)) + 2 * std::popcount(b & c);
    return ((e % 4) + 4) % 4;
}

}  // namespace

MubDesign::MubDesign(int k) : k_(k), q_(1 << k), field_(&GfField::get(k)) {
    phase_.assign(q_ + 1, std::vector<std::int8_t>(q_, 1));
    // computational clique: all-Z labels multiply without phases
    for (std::uint32_t lambda = 0; lambda < static_cast<std::uint32_t>(q_); ++lambda) {
        // generators G_j = P_{(e_j | lambda * e_j)}
        std::vector<std::uint32_t> gen_z(k_);
        for (int j = 0; j < k_; ++j) gen_z[j] = field_->mul_sd(lambda, 1u << j);
        for (std::uint32_t b = 1; b < static_cast<std::uint32_t>(q_); ++b) {
            std::uint32_t x = 0, z = 0;
            int exponent = 0;
            for (int j = 0; j < k_; ++j) {
                if (!(b >> j & 1u)) continue;
                exponent = (exponent + product_phase_exponent(x, z, 1u << j, gen_z[j])) % 4;
                x ^= 1u << j;
                z ^= gen_z[j];
            }
            // the accumulated product is i^exponent P_(b | lambda*b)
            if (exponent == 2) {
                phase_[lambda][b] = -1;
            } else if (exponent != 0) {
                throw DecompositionFailure("MubDesign: non-real phase correction");
            }
        }
    }
}

std::pair<std::uint32_t, std::uint32_t> MubDesign::pauli_label(int clique, std::uint32_t b) const {
    if (clique == q_) return {0u, b};
    return {b, field_->mul_sd(static_cast<std::uint32_t>(clique), b)};
}

Matrix MubDesign::projector(int clique, std::uint32_t a) const {
    Matrix proj = Matrix::Zero(q_, q_);
    for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(q_); ++b) {
        const auto [xp, zp] = pauli_label(clique, b);
        const double sign = (dot2(a, b) ? -1.0 : 1.0) * phase_[clique][b];
        // P_(x|z)[r, c] = i^{x.z} (-1)^{z.c} [r == c ^ x]
        Complex ipow(1.0, 0.0);
        switch (std::popcount(xp & zp) & 3) {
            case 1: ipow = Complex(0.0, 1.0); break;
            case 2: ipow = Complex(-1.0, 0.0); break;
            case 3: ipow = Complex(0.0, -1.0); break;
            default: break;
        }
        for (std::uint32_t col = 0; col < static_cast<std::uint32_t>(q_); ++col) {
            proj(col ^ xp, col) += sign * ipow * (dot2(zp, col) ? -1.0 : 1.0);
        }
    }
    return proj / static_cast<double>(q_);
}

RealMatrix MubDesign::born_probs(const DensityMatrix& rho) const {
    if (rho.dim() != q_) throw ShapeError("MubDesign::born_probs: dimension mismatch");
    const Matrix& m = rho.mat();
    RealMatrix probs(q_ + 1, q_);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (int c = 0; c <= q_; ++c) {
        RealVector coeff(q_);
        coeff(0) = 1.0;  // tr rho
        for (std::uint32_t b = 1; b < static_cast<std::uint32_t>(q_); ++b) {
            const auto [xp, zp] = pauli_label(c, b);
            // r_u = tr(rho P_u) = i^{x.z} sum_col rho[col, col ^ x] (-1)^{z.col}
            Complex acc(0.0, 0.0);
            for (std::uint32_t col = 0; col < static_cast<std::uint32_t>(q_); ++col) {
                const double sign = dot2(zp, col) ? -1.0 : 1.0;
                acc += sign * m(col, col ^ xp);
            }
            switch (std::popcount(xp & zp) & 3) {
                case 1: acc *= Complex(0.0, 1.0); break;
                case 2: acc = -acc; break;
                case 3: acc *= Complex(0.0, -1.0); break;
                default: break;
            }
            coeff(b) = acc.real() * phase_[c][b];
        }
        fwht(coeff);
        probs.row(c) = coeff.transpose() / q_;
    }
    return probs;
}

Design MubDesign::to_design() const {
    if (k_ > 6) throw Unsupported("MubDesign::to_design: dense projectors capped at k <= 6");
    std::vector<SpectralDecomp> obs;
    obs.reserve(q_ + 1);
    for (int c = 0; c <= q_; ++c) {
        SpectralDecomp o;
        o.field = FieldTag::Complex;
        o.q = q_;
        for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(q_); ++a) {
            o.eigs.push_back(static_cast<double>(a));
            o.mults.push_back(1);
            o.projectors.push_back(projector(c, a));
        }
        obs.push_back(std::move(o));
    }
    return Design(FieldTag::Complex, q_, std::move(obs));
}

HermMat mub_reconstruct(const MubDesign& mub, const CountsTable& counts) {
    const int q = mub.q();
    if (counts.num_observables() != q + 1) {
        throw ShapeError("mub_reconstruct: expected q + 1 clique rows");
    }
    for (const CountsTable::Row& row : counts.rows) {
        if (row.probs.size() != q) throw ShapeError("mub_reconstruct: row length mismatch");
    }
    const GfField& field = mub.field();

    // per-clique inverse transform: rhat_{(b | lambda*b)} = phi_lambda(b) WHT(p_lambda)[b]
    RealMatrix rhat(q + 1, q);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int c = 0; c <= q; ++c) {
        RealVector y = counts.rows[c].probs;
        fwht(y);
        for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(q); ++b) {
            rhat(c, b) = y(b) * mub.phase(c, b);
        }
    }

    Matrix out(q, q);
    // diagonal from the computational clique, rhat_{(0|0)} pinned at 1
    {
        RealVector diag(q);
        diag(0) = 1.0;
        for (int b = 1; b < q; ++b) diag(b) = rhat(q, b);
        fwht(diag);
        for (int x = 0; x < q; ++x) out(x, x) = diag(x) / q;
    }
    // off-diagonals: entries with row ^ col = d come from the q labels (d | lambda*d)
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (std::uint32_t d = 1; d < static_cast<std::uint32_t>(q); ++d) {
        std::vector<Complex> z(q);
        for (std::uint32_t lambda = 0; lambda < static_cast<std::uint32_t>(q); ++lambda) {
            const std::uint32_t zp = field.mul_sd(lambda, d);
            Complex v(rhat(lambda, d), 0.0);
            switch (std::popcount(d & zp) & 3) {
                case 1: v *= Complex(0.0, 1.0); break;
                case 2: v = -v; break;
                case 3: v *= Complex(0.0, -1.0); break;
                default: break;
            }
            z[lambda] = v;
        }
        fwht_complex(z.data(), q);
        // entry [col ^ d, col] picks frequency index d * col under the
        // self-dual trace pairing
        for (std::uint32_t col = 0; col < static_cast<std::uint32_t>(q); ++col) {
            out(col ^ d, col) = z[field.mul_sd(d, col)] / static_cast<double>(q);
        }
    }
    return HermMat(FieldTag::Complex, std::move(out));
}

namespace reference {

RealVector wht_naive(const RealVector& x) {
    const int n = static_cast<int>(x.size());
    RealVector y = RealVector::Zero(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            y(a) += (dot2(a, b) ? -1.0 : 1.0) * x(b);
        }
    }
    return y;
}

HermMat mub_reconstruct_projector_sum(const MubDesign& mub, const CountsTable& counts) {
    const int q = mub.q();
    Matrix acc = Matrix::Zero(q, q);
    for (int c = 0; c <= q; ++c) {
        for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(q); ++a) {
            acc += counts.rows[c].probs(a) * mub.projector(c, a);
        }
    }
    acc -= Matrix::Identity(q, q);
    return HermMat(FieldTag::Complex, std::move(acc));
}

}  // namespace reference

}  // namespace qst
