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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qst/design.hpp"
#include "qst/measurement.hpp"

using namespace qst;

namespace {

Design pauli_design() {
    return qubit_bloch_design(
        {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()});
}

RealVector sorted_eigenvalues(const RealMatrix& m) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace

TEST_CASE("design rejects single-eigenvalue observables") {
    std::vector<SpectralDecomp> obs;
    obs.push_back(spectral(HermMat::identity(FieldTag::Complex, 2)));
    CHECK_THROWS_AS(Design(FieldTag::Complex, 2, std::move(obs)), SpectrumError);
}

TEST_CASE("design_apply basics") {
    const Design d = pauli_design();
    SUBCASE("identity maps to the all-ones matrix") {
        const RealMatrix rows = design_apply(d, HermMat::identity(FieldTag::Complex, 2));
        CHECK((rows - RealMatrix::Ones(3, 2)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("bloch closed form per row") {
        const Eigen::Vector3d a(0.2, -0.3, 0.6);
        const RealMatrix rows = design_apply(d, bloch_to_density(a).herm());
        const Eigen::Vector3d axes[3] = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                                         Eigen::Vector3d::UnitZ()};
        for (int i = 0; i < 3; ++i) {
            // outcome order is ascending in the eigenvalue: (-1, +1)
            CHECK(rows(i, 0) == doctest::Approx(0.5 * (1.0 - a.dot(axes[i]))));
            CHECK(rows(i, 1) == doctest::Approx(0.5 * (1.0 + a.dot(axes[i]))));
        }
    }
    SUBCASE("single z observable on a diagonal state") {
        std::vector<SpectralDecomp> obs{spectral(HermMat(FieldTag::Complex, pauli_z()))};
        const Design dz(FieldTag::Complex, 2, std::move(obs));
        Matrix rho = Matrix::Zero(2, 2);
        rho(0, 0) = 0.9;
        rho(1, 1) = 0.1;
        const RealMatrix rows = design_apply(dz, HermMat(FieldTag::Complex, rho));
        CHECK(rows(0, 0) == doctest::Approx(0.1));
        CHECK(rows(0, 1) == doctest::Approx(0.9));
    }
}

TEST_CASE("design_adjoint basics") {
    const Design d = pauli_design();
    SUBCASE("all-ones maps to n I") {
        const HermMat s = design_adjoint(d, RealMatrix::Ones(3, 2));
        CHECK((s.mat() - 3.0 * Matrix::Identity(2, 2)).norm() < 1e-12);
    }
    SUBCASE("single observable recovery of sigma_z") {
        std::vector<SpectralDecomp> obs{spectral(HermMat(FieldTag::Complex, pauli_z()))};
        const Design dz(FieldTag::Complex, 2, std::move(obs));
        RealMatrix a(1, 2);
        a << -1.0, 1.0;  // ascending outcome order
        CHECK((design_adjoint(dz, a).mat() - pauli_z()).norm() < 1e-12);
    }
    SUBCASE("adjoint identity <D S, A> = <S, D* A>") {
        Rng rng(31);
        for (int trial = 0; trial < 100; ++trial) {
            const HermMat s = random_herm(FieldTag::Complex, 2, rng);
            RealMatrix a(3, 2);
            for (int i = 0; i < a.size(); ++i) a(i / 2, i % 2) = rng.gaussian();
            const double lhs = (design_apply(d, s).array() * a.array()).sum();
            const double rhs = frob_inner(s, design_adjoint(d, a));
            CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("gram superoperator of the Pauli design") {
    const Design d = pauli_design();
    const RealVector eigs = sorted_eigenvalues(d.gram_superop().matrix);
    REQUIRE(eigs.size() == 4);
    CHECK(eigs(0) == doctest::Approx(1.0 / 3.0));
    CHECK(eigs(1) == doctest::Approx(1.0 / 3.0));
    CHECK(eigs(2) == doctest::Approx(1.0 / 3.0));
    CHECK(eigs(3) == doctest::Approx(1.0));
    CHECK(d.gram_superop().matrix.trace() == doctest::Approx(d.q_bar()));
}

TEST_CASE("gram superoperator fixes the identity") {
    Rng rng(5);
    RealVector spectrum(4);
    spectrum << 0, 1, 2, 3;
    Matrix m = spectrum.cast<Complex>().asDiagonal();
    const SpectralDecomp seed_obs = spectral(HermMat(FieldTag::Complex, m));
    const Design d = haar_random_design(FieldTag::Complex, 4, 7, 99, seed_obs);
    const HermMat image = d.gram_superop().apply(d.basis(), HermMat::identity(FieldTag::Complex, 4));
    CHECK((image.mat() - Matrix::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("x and y alone leave sigma_z unidentifiable") {
    const Design d = qubit_bloch_design({Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()});
    const CompletenessReport rep = check_complete(d);
    CHECK_FALSE(rep.complete);
    CHECK(rep.null_space_dim == 1);
    // the null direction is sigma_z
    const HermMat image = d.gram_superop().apply(d.basis(), HermMat(FieldTag::Complex, pauli_z()));
    CHECK(frob_norm(image) < 1e-12);
}

TEST_CASE("repeated axis design has a two-dimensional null space") {
    const Design d = qubit_bloch_design({Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitZ()});
    const CompletenessReport rep = check_complete(d);
    CHECK_FALSE(rep.complete);
    CHECK(rep.null_space_dim == 2);
}

TEST_CASE("unitary design checks") {
    SUBCASE("Pauli qubit design is a 1/3 unitary design") {
        const UnitaryDesignReport rep = check_unitary_design(pauli_design());
        CHECK(rep.is_unitary);
        CHECK(rep.alpha_theory == doctest::Approx(1.0 / 3.0));
        CHECK(rep.alpha_hat == doctest::Approx(1.0 / 3.0));
        CHECK(rep.deviation < 1e-10);
    }
    SUBCASE("regular tetrahedron is a 1/3 unitary design") {
        const double s = 1.0 / std::sqrt(3.0);
        const Design d = qubit_bloch_design({{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}});
        const UnitaryDesignReport rep = check_unitary_design(d);
        CHECK(rep.is_unitary);
        CHECK(rep.alpha_theory == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("complete but not unitary") {
        const Design d = qubit_bloch_design(
            {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ(),
             Eigen::Vector3d::UnitZ()});
        CHECK(check_complete(d).complete);
        CHECK_FALSE(check_unitary_design(d).is_unitary);
    }
}

TEST_CASE("pauli tensor design") {
    SUBCASE("k=1 gives the three Pauli axes") {
        const Design d = pauli_tensor_design(1);
        CHECK(d.size() == 3);
        CHECK(d.q() == 2);
        CHECK(check_unitary_design(d).is_unitary);
    }
    SUBCASE("k=2 sector eigenvalues 1, 1/3, 1/9") {
        const Design d = pauli_tensor_design(2);
        CHECK(d.size() == 9);
        CHECK(d.rank_one());
        const RealVector eigs = sorted_eigenvalues(d.gram_superop().matrix);
        REQUIRE(eigs.size() == 16);
        int n_ninth = 0, n_third = 0, n_one = 0;
        for (int i = 0; i < eigs.size(); ++i) {
            if (std::abs(eigs(i) - 1.0 / 9.0) < 1e-9) ++n_ninth;
            else if (std::abs(eigs(i) - 1.0 / 3.0) < 1e-9) ++n_third;
            else if (std::abs(eigs(i) - 1.0) < 1e-9) ++n_one;
        }
        CHECK(n_ninth == 9);
        CHECK(n_third == 6);
        CHECK(n_one == 1);
        CHECK_FALSE(check_unitary_design(d).is_unitary);
    }
    SUBCASE("identity slots give 4^k - 1 settings with degenerate projections") {
        const Design d = pauli_tensor_design(2, true);
        CHECK(d.size() == 15);
        int rank_one_count = 0;
        for (const SpectralDecomp& o : d.observables()) {
            if (o.mults == std::vector<int>(o.mults.size(), 1)) ++rank_one_count;
        }
        CHECK(rank_one_count == 9);
    }
}

TEST_CASE("budget identity and E-optimality bound") {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        RealVector spectrum(4);
        spectrum << -1.5, 0.25, 1.0, 3.0;
        Matrix m = spectrum.cast<Complex>().asDiagonal();
        const SpectralDecomp seed_obs = spectral(HermMat(FieldTag::Complex, m));
        const Design d =
            haar_random_design(FieldTag::Complex, 4, 5 + trial, 1000 + trial, seed_obs);
        const RealMatrix& g = d.gram_superop().matrix;
        CHECK(g.trace() == doctest::Approx(d.q_bar()).epsilon(1e-9));

        const double alpha = (d.q_bar() - 1.0) / (d.q() - 1.0) * alpha_q(d.field(), d.q());
        const RealVector eigs = sorted_eigenvalues(g);
        CHECK(eigs(0) <= alpha + 1e-9);
    }
}

TEST_CASE("quadratic identity under a unitary design") {
    const Design d = pauli_design();
    const double alpha = 1.0 / 3.0;
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const HermMat s = random_herm(FieldTag::Complex, 2, rng);
        const double lhs = design_apply(d, s).squaredNorm() / d.size();
        const double tr2 = (s.mat() * s.mat()).trace().real();
        const double tr = s.trace();
        const double rhs = alpha * tr2 + (1.0 - alpha) / 2.0 * tr * tr;
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("purity map under a unitary design") {
    const Design d = pauli_design();
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        RealVector eigs(2);
        const double u = 0.5 + 0.5 * rng.uniform();
        eigs << u, 1.0 - u;
        const HermMat rho = random_density(FieldTag::Complex, eigs, rng);
        const double lhs = design_apply(d, rho).squaredNorm() / d.size();
        const double purity = (rho.mat() * rho.mat()).trace().real();
        CHECK(std::abs(lhs - (purity - 0.5) / 3.0 - 0.5) < 1e-9);
    }
}

TEST_CASE("rotation invariance of the unitary design constant") {
    Rng rng(31);
    const Design d = pauli_design();
    const Matrix v = haar_unitary(FieldTag::Complex, 2, rng);
    std::vector<SpectralDecomp> rotated;
    for (const SpectralDecomp& o : d.observables()) {
        SpectralDecomp r = o;
        for (Matrix& proj : r.projectors) proj = v * proj * v.adjoint();
        rotated.push_back(std::move(r));
    }
    const Design dr(FieldTag::Complex, 2, std::move(rotated));
    const UnitaryDesignReport a = check_unitary_design(d);
    const UnitaryDesignReport b = check_unitary_design(dr);
    CHECK(b.is_unitary);
    CHECK(std::abs(a.alpha_hat - b.alpha_hat) < 1e-9);
}

TEST_CASE("haar design approaches the unitary design condition") {
    RealVector spectrum(8);
    for (int i = 0; i < 8; ++i) spectrum(i) = i;
    Matrix m = spectrum.cast<Complex>().asDiagonal();
    const SpectralDecomp seed_obs = spectral(HermMat(FieldTag::Complex, m));
    const Design small = haar_random_design(FieldTag::Complex, 8, 50, 4242, seed_obs);
    const Design large = haar_random_design(FieldTag::Complex, 8, 1000, 4242, seed_obs);
    const double dev_small = check_unitary_design(small).deviation;
    const double dev_large = check_unitary_design(large).deviation;
    CHECK(dev_large < dev_small);

    SUBCASE("single observable budget") {
        const Design one = haar_random_design(FieldTag::Complex, 8, 1, 7, seed_obs);
        CHECK(one.gram_superop().matrix.trace() == doctest::Approx(8.0).epsilon(1e-9));
    }
}

TEST_CASE("rebit angle design is complete for distinct angles") {
    const Design d = rebit_angle_design({0.1, 1.3, 2.9});
    CHECK(d.field() == FieldTag::Real);
    CHECK(check_complete(d).complete);
    // uniform angles give a 1/2 unitary design
    std::vector<double> uniform;
    for (int i = 1; i <= 12; ++i) uniform.push_back(2.0 * M_PI * i / 12);
    const UnitaryDesignReport rep = check_unitary_design(rebit_angle_design(uniform));
    CHECK(rep.is_unitary);
    CHECK(rep.alpha_theory == doctest::Approx(0.5));
}

TEST_CASE("parallel gram assembly matches the serial reference bitwise") {
    RealVector spectrum(4);
    spectrum << 0, 1, 2, 3;
    Matrix m = spectrum.cast<Complex>().asDiagonal();
    const SpectralDecomp seed_obs = spectral(HermMat(FieldTag::Complex, m));
    const Design d = haar_random_design(FieldTag::Complex, 4, 33, 2024, seed_obs);
    const RealMatrix parallel = d.gram_superop().matrix;
    const RealMatrix serial = reference::gram_superop_serial(d).matrix;
    CHECK((parallel - serial).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero bloch vector is rejected") {
    CHECK_THROWS_AS(qubit_bloch_design({Eigen::Vector3d::Zero()}), DegenerateObservable);
}

TEST_CASE("traceless gram action matches the second-moment matrix of the axes") {
    Rng rng(37);
    std::vector<Eigen::Vector3d> axes;
    for (int i = 0; i < 5; ++i) {
        Eigen::Vector3d u(rng.gaussian(), rng.gaussian(), rng.gaussian());
        axes.push_back(u.normalized());
    }
    const Design d = qubit_bloch_design(axes);
    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    for (const auto& u : axes) second += u * u.transpose() / static_cast<double>(axes.size());

    for (int trial = 0; trial < 20; ++trial) {
        Eigen::Vector3d a(rng.gaussian(), rng.gaussian(), rng.gaussian());
        const Matrix s = a.x() * pauli_x() + a.y() * pauli_y() + a.z() * pauli_z();
        const HermMat image =
            d.gram_superop().apply(d.basis(), HermMat(FieldTag::Complex, s));
        const Eigen::Vector3d want = second * a;
        const Matrix want_m = want.x() * pauli_x() + want.y() * pauli_y() + want.z() * pauli_z();
        CHECK((image.mat() - want_m).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + a.norm()));
    }
}
