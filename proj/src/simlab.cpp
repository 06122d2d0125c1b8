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

#include "qst/simlab.hpp"

#include <cmath>
#include <numeric>

#include "qst/parallel.hpp"
#include "qst/psd_projection.hpp"

namespace qst {

namespace {

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

double stderr_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / (xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
}

double loglog_slope(const std::vector<std::int64_t>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(static_cast<double>(xs[i]));
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Eigenpair errors against the true descending eigensystem, with eigenvalues
// matched by descending order and eigenvectors aligned by the global phase
// maximizing Re<v_hat, v>.
void eigenpair_errors(const Matrix& estimate, const RealVector& true_vals_desc,
                      const Matrix& true_vecs_desc, RealVector& eval_err, RealVector& evec_err) {
    const int q = static_cast<int>(estimate.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(estimate);
    eval_err.resize(q);
    evec_err.resize(q);
    for (int i = 0; i < q; ++i) {
        const int src = q - 1 - i;  // descending
        eval_err(i) = std::abs(solver.eigenvalues()(src) - true_vals_desc(i));
        Eigen::VectorXcd vhat = solver.eigenvectors().col(src);
        const Complex inner = true_vecs_desc.col(i).adjoint() * vhat;
        if (std::abs(inner) > 1e-15) vhat *= std::conj(inner) / std::abs(inner);
        evec_err(i) = (vhat - true_vecs_desc.col(i)).norm();
    }
}

// Fixed-probability multinomial sampler for a design: probabilities d_ik[rho]
// are precomputed once, repetitions only draw counts.
struct DesignSampler {
    std::vector<RealVector> probs;  // per observable, length q_i

    static DesignSampler from_design(const Design& d, const DensityMatrix& rho) {
        DesignSampler s;
        s.probs.reserve(d.size());
        for (int i = 0; i < d.size(); ++i) {
            s.probs.push_back(born_probs(rho, povm_from_spectral(d.observable(i))));
        }
        return s;
    }

    CountsTable draw(std::int64_t r, Rng& rng) const {
        CountsTable t;
        t.shots = r;
        for (const RealVector& p : probs) {
            CountsTable::Row row;
            row.counts = multinomial_counts(p, r, rng);
            row.probs = RealVector(p.size());
            for (int k = 0; k < p.size(); ++k) {
                row.probs(k) = static_cast<double>(row.counts[k]) / r;
            }
            t.rows.push_back(std::move(row));
        }
        return t;
    }

    CountsTable exact() const {
        CountsTable t;
        t.shots = 0;
        for (const RealVector& p : probs) t.rows.push_back({{}, p});
        return t;
    }
};

// Precomputed LSE applicator: pseudo-inverse of the Gram superoperator.
struct LsePrecomp {
    RealMatrix pinv;  // D_sa x D_sa
    const HermBasis* basis;

    static LsePrecomp from_design(const Design& d) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(d.gram_superop().matrix);
        const RealVector& vals = solver.eigenvalues();
        const double cutoff = 1e-10 * vals.cwiseAbs().maxCoeff();
        RealVector inv(vals.size());
        for (int i = 0; i < vals.size(); ++i) inv(i) = vals(i) > cutoff ? 1.0 / vals(i) : 0.0;
        return {solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().transpose(),
                &d.basis()};
    }

    RealVector fit_vec(const Design& d, const CountsTable& counts) const {
        const HermMat target = design_adjoint(d, counts_to_data_matrix(d, counts)) *
                               (1.0 / d.size());
        return pinv * basis->vectorize(target);
    }
};

// Per-repetition QUARK applicator.  The estimator is affine in the effective
// data matrix with linear part A_K, so one reference fit plus a matrix-vector
// product per repetition reproduces quark_fit exactly.
struct QuarkPrecomp {
    const QuarkOperators* ops;
    RealVector base;     // fit at the reference data matrix
    RealVector pk_base;  // reference data matrix coordinates

    static QuarkPrecomp from_ops(const QuarkOperators& ops) {
        const HermBasis& basis = HermBasis::get(ops.field, ops.q);
        return {&ops, basis.vectorize(quark_fit(ops).rho_hat), basis.vectorize(ops.p_k)};
    }

    RealVector pk_vec(const CountsTable& counts) const {
        RealVector pk = RealVector::Zero(pk_base.size());
        for (int i = 0; i < ops->n; ++i) {
            pk.noalias() += ops->m_vecs[i] * counts.rows[i].probs;
        }
        return pk / ops->n;
    }

    RealVector fit_vec(const CountsTable& counts) const {
        return base + ops->centered_inverse.matrix * (pk_vec(counts) - pk_base);
    }
};

template <typename Body>
void parallel_reps(int repetitions, const Body& body) {
    std::string error;
#pragma omp parallel for schedule(dynamic, 16) num_threads(max_threads())
    for (int j = 0; j < repetitions; ++j) {
        try {
            body(j);
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error("repetition failed: " + error);
}

DensityMatrix state_from_eigenvalues(FieldTag field, const RealVector& eigenvalues,
                                     bool haar_basis, std::uint64_t seed) {
    if (haar_basis) {
        Rng rng(substream_seed(seed, 0xFFFFFFFF00000001ULL));
        return DensityMatrix(random_density(field, eigenvalues, rng));
    }
    Matrix m = eigenvalues.cast<Complex>().asDiagonal();
    return DensityMatrix(HermMat(field, std::move(m)));
}

}  // namespace

RebitResult run_rebit(const RebitConfig& cfg) {
    if (cfg.n < 2 || cfg.r < 1 || cfg.repetitions < 1) {
        throw ConfigError("run_rebit: n, r and repetitions must be positive");
    }
    const int n = cfg.n;
    std::vector<double> cos_t(n), sin_t(n), d_plus(n);
    for (int i = 0; i < n; ++i) {
        const double theta_i = 2.0 * M_PI * (i + 1) / n;
        cos_t[i] = std::cos(theta_i);
        sin_t[i] = std::sin(theta_i);
        d_plus[i] = 0.5 * (1.0 + cfg.purity * std::cos(cfg.theta - theta_i));
    }

    RebitResult res;
    res.mse.resize(cfg.repetitions);
    res.s_hat.resize(cfg.repetitions);
    res.theta_hat.resize(cfg.repetitions);
    const Complex z_true = cfg.purity * std::exp(Complex(0.0, cfg.theta));

    parallel_reps(cfg.repetitions, [&](int j) {
        Rng rng(substream_seed(cfg.seed, j));
        Complex p_bar(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            const double p = static_cast<double>(rng.binomial(cfg.r, d_plus[i])) / cfg.r;
            p_bar += (2.0 * p - 1.0) * Complex(cos_t[i], sin_t[i]);
        }
        p_bar /= static_cast<double>(n);
        const Complex z_hat = 2.0 * p_bar;  // uniform angles give a 1/2-unitary design
        res.mse[j] = std::norm(z_hat - z_true) / 2.0;
        res.s_hat[j] = std::min(std::abs(z_hat), 1.0);
        res.theta_hat[j] = std::arg(z_hat);
    });

    res.mse_mean = mean_of(res.mse);
    res.mse_stderr = stderr_of(res.mse);
    res.theory = 2.0 / (static_cast<double>(n) * cfg.r) * (1.0 - cfg.purity * cfg.purity / 2.0);
    int shrunk = 0;
    res.s_hat_min = res.s_hat[0];
    res.s_hat_max = res.s_hat[0];
    for (double s : res.s_hat) {
        if (s >= 1.0) ++shrunk;
        res.s_hat_min = std::min(res.s_hat_min, s);
        res.s_hat_max = std::max(res.s_hat_max, s);
    }
    res.shrink_rate = static_cast<double>(shrunk) / cfg.repetitions;
    return res;
}

SpectralResult run_spectral(const SpectralConfig& cfg) {
    const int q = cfg.q;
    if (cfg.state_eigenvalues.size() != q) {
        throw ConfigError("run_spectral: state eigenvalues must have length q");
    }
    const DensityMatrix rho = state_from_eigenvalues(cfg.field, cfg.state_eigenvalues, false, 0);

    SpectralDecomp seed_obs;
    {
        RealVector spectrum(q);
        for (int i = 0; i < q; ++i) spectrum(i) = i;
        Matrix m = spectrum.cast<Complex>().asDiagonal();
        seed_obs = spectral(HermMat(cfg.field, std::move(m)));
    }
    const Design design = haar_random_design(cfg.field, q, cfg.n, substream_seed(cfg.seed, 1), seed_obs);
    const DesignSampler sampler = DesignSampler::from_design(design, rho);
    const LsePrecomp lse = LsePrecomp::from_design(design);
    const QuarkOperators ops = quark_operators(design, cfg.kernel, sampler.exact());
    const QuarkPrecomp quark = QuarkPrecomp::from_ops(ops);
    const HermBasis& basis = design.basis();
    const RealVector rho_vec = basis.vectorize(rho.herm());

    RealVector true_vals = cfg.state_eigenvalues;  // descending by construction
    Matrix true_vecs = Matrix::Identity(q, q);

    SpectralResult res;
    const int reps = cfg.repetitions;
    res.eval_err_lse.resize(reps);
    res.evec_err_lse.resize(reps);
    res.eval_err_quark.resize(reps);
    res.evec_err_quark.resize(reps);
    res.mse_lse.resize(reps);
    res.mse_quark.resize(reps);

    parallel_reps(reps, [&](int j) {
        Rng rng(substream_seed(cfg.seed, j));
        const CountsTable counts = sampler.draw(cfg.r, rng);
        const RealVector lse_vec = lse.fit_vec(design, counts);
        const RealVector quark_vec = quark.fit_vec(counts);
        res.mse_lse[j] = (lse_vec - rho_vec).squaredNorm();
        res.mse_quark[j] = (quark_vec - rho_vec).squaredNorm();
        eigenpair_errors(basis.devectorize(lse_vec).mat(), true_vals, true_vecs,
                         res.eval_err_lse[j], res.evec_err_lse[j]);
        eigenpair_errors(basis.devectorize(quark_vec).mat(), true_vals, true_vecs,
                         res.eval_err_quark[j], res.evec_err_quark[j]);
    });
    res.mse_lse_mean = mean_of(res.mse_lse);
    res.mse_quark_mean = mean_of(res.mse_quark);
    return res;
}

MseVsRResult run_mse_vs_r(const MseVsRConfig& cfg) {
    if (cfg.r_grid.empty()) throw ConfigError("run_mse_vs_r: empty r grid");
    const bool use_mub = cfg.design == "mub";
    if (!use_mub && cfg.design != "haar") {
        throw ConfigError("run_mse_vs_r: design must be haar or mub");
    }
    const int q = use_mub ? (1 << cfg.k) : cfg.q;
    if (cfg.state_eigenvalues.size() != q) {
        throw ConfigError("run_mse_vs_r: state eigenvalues must have length q");
    }
    const DensityMatrix rho =
        state_from_eigenvalues(cfg.field, cfg.state_eigenvalues, cfg.state_haar_basis, cfg.seed);

    std::optional<Design> design;
    if (use_mub) {
        design = MubDesign(cfg.k).to_design();
    } else {
        RealVector spectrum = cfg.spectrum;
        if (spectrum.size() == 0) {
            spectrum.resize(q);
            for (int i = 0; i < q; ++i) spectrum(i) = i;
        }
        if (spectrum.size() != q) {
            throw ConfigError("run_mse_vs_r: spectrum must have length q");
        }
        Matrix m = spectrum.cast<Complex>().asDiagonal();
        const SpectralDecomp seed_obs = spectral(HermMat(cfg.field, std::move(m)));
        design = haar_random_design(cfg.field, q, cfg.n, substream_seed(cfg.seed, 1), seed_obs);
    }
    const int n = design->size();
    const DesignSampler sampler = DesignSampler::from_design(*design, rho);
    const LsePrecomp lse = LsePrecomp::from_design(*design);
    const HermBasis& basis = design->basis();
    const RealVector rho_vec = basis.vectorize(rho.herm());

    std::vector<QuarkOperators> kernel_ops;
    std::vector<QuarkPrecomp> quarks;
    kernel_ops.reserve(cfg.kernels.size());
    for (const auto& [name, kernel] : cfg.kernels) {
        kernel_ops.push_back(quark_operators(*design, kernel, sampler.exact()));
    }
    for (const QuarkOperators& ops : kernel_ops) quarks.push_back(QuarkPrecomp::from_ops(ops));

    MseVsRResult res;
    res.r_grid = cfg.r_grid;
    res.estimators.push_back("lse");
    for (const auto& [name, kernel] : cfg.kernels) res.estimators.push_back(name);
    for (const std::string& est : res.estimators) {
        res.mse[est] = {};
        res.stderr_[est] = {};
    }

    const int reps = cfg.repetitions;
    for (std::size_t ri = 0; ri < cfg.r_grid.size(); ++ri) {
        const std::int64_t r = cfg.r_grid[ri];
        std::vector<std::vector<double>> errs(res.estimators.size(),
                                              std::vector<double>(reps, 0.0));
        parallel_reps(reps, [&](int j) {
            Rng rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(ri) * reps + j));
            const CountsTable counts = sampler.draw(r, rng);
            errs[0][j] = (lse.fit_vec(*design, counts) - rho_vec).squaredNorm();
            for (std::size_t ki = 0; ki < quarks.size(); ++ki) {
                errs[ki + 1][j] = (quarks[ki].fit_vec(counts) - rho_vec).squaredNorm();
            }
        });
        for (std::size_t e = 0; e < res.estimators.size(); ++e) {
            res.mse[res.estimators[e]].push_back(mean_of(errs[e]));
            res.stderr_[res.estimators[e]].push_back(stderr_of(errs[e]));
        }
        res.theory.push_back(lse_mse_theory(cfg.field, q, rho.purity(), n, r));
    }
    for (const std::string& est : res.estimators) {
        res.slope[est] = loglog_slope(cfg.r_grid, res.mse[est]);
    }
    return res;
}

MubVsTheoryResult run_mub_vs_theory(const MubVsTheoryConfig& cfg) {
    MubVsTheoryResult res;
    res.k_grid = cfg.k_grid;
    for (int k : cfg.k_grid) {
        const int q = 1 << k;
        RealVector eigs = RealVector::Zero(q);
        for (int i = 0; i < std::min<int>(q, cfg.state_eigenvalues.size()); ++i) {
            eigs(i) = cfg.state_eigenvalues(i);
        }
        if (std::abs(eigs.sum() - 1.0) > 1e-9) {
            throw ConfigError("run_mub_vs_theory: state eigenvalues must sum to 1 within each k");
        }
        const DensityMatrix rho =
            state_from_eigenvalues(FieldTag::Complex, eigs, true, cfg.seed + k);
        const MubDesign mub(k);
        const RealMatrix probs = mub.born_probs(rho);

        std::vector<double> errs(cfg.repetitions, 0.0);
        parallel_reps(cfg.repetitions, [&](int j) {
            Rng rng(substream_seed(cfg.seed + k, j));
            CountsTable counts;
            counts.shots = cfg.r;
            for (int c = 0; c <= q; ++c) {
                CountsTable::Row row;
                row.counts = multinomial_counts(probs.row(c), cfg.r, rng);
                row.probs = RealVector(q);
                for (int a = 0; a < q; ++a) {
                    row.probs(a) = static_cast<double>(row.counts[a]) / cfg.r;
                }
                counts.rows.push_back(std::move(row));
            }
            const HermMat rho_hat = mub_reconstruct(mub, counts);
            errs[j] = (rho_hat.mat() - rho.mat()).squaredNorm();
        });
        res.mse_mean.push_back(mean_of(errs));
        res.mse_stderr.push_back(stderr_of(errs));
        res.theory.push_back(lse_mse_theory(FieldTag::Complex, q, rho.purity(), q + 1, cfg.r));
    }
    return res;
}

QmdNoiseResult run_qmd_noise(const QmdNoiseConfig& cfg) {
    QmdNoiseResult res;
    const char* kinds[] = {"pauli", "bitflip", "two_noisy", "modular"};
    for (int c = 0; c < cfg.configurations; ++c) {
        Rng rng(substream_seed(cfg.seed, c));
        const std::string kind = kinds[c % 4];
        // random kernel on two outcomes
        Kernel kernel = Kernel::zero_one();
        switch (c % 3) {
            case 0: kernel = Kernel::zero_one(); break;
            case 1: kernel = Kernel::gaussian(0.3 + 2.0 * rng.uniform()); break;
            case 2: kernel = Kernel::polynomial(2, 0.5 + rng.uniform()); break;
        }

        auto random_axis = [&]() {
            Eigen::Vector3d u(rng.gaussian(), rng.gaussian(), rng.gaussian());
            while (u.norm() < 1e-8) u = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
            return Eigen::Vector3d(u / u.norm());
        };
        auto obs_from_axis = [&](const Eigen::Vector3d& u) {
            const Matrix m = u.x() * pauli_x() + u.y() * pauli_y() + u.z() * pauli_z();
            return spectral(HermMat(FieldTag::Complex, m));
        };

        QmdNoiseResult::Row row;
        row.kind = kind;
        if (kind == "pauli") {
            const int i = static_cast<int>(rng.uniform() * 3) % 3;
            const int j = (i + 1 + static_cast<int>(rng.uniform() * 2) % 2) % 3;
            const Matrix gram = gram_matrix(kernel, {1.0, -1.0}).cast<Complex>();
            // evaluate the closed form at its maximally distinguishing state
            const Matrix rho_plus =
                0.5 * (Matrix::Identity(2, 2) + (pauli(i) - pauli(j)) / std::sqrt(2.0));
            row.closed_form =
                qmd_pauli(i, j, DensityMatrix(HermMat(FieldTag::Complex, rho_plus)), gram);
            Povm a, b;
            a.outcomes = {1.0, -1.0};
            b.outcomes = {1.0, -1.0};
            const SpectralDecomp oi = obs_from_axis(Eigen::Vector3d::Unit(i));
            const SpectralDecomp oj = obs_from_axis(Eigen::Vector3d::Unit(j));
            a.effects = {HermMat(FieldTag::Complex, oi.projectors[1]),
                         HermMat(FieldTag::Complex, oi.projectors[0])};
            b.effects = {HermMat(FieldTag::Complex, oj.projectors[1]),
                         HermMat(FieldTag::Complex, oj.projectors[0])};
            row.brute = brute_qmd_pure_search(a, b, gram, kSchattenInf, cfg.mesh_points).value;
        } else if (kind == "bitflip") {
            const double eta = rng.uniform();
            const Eigen::Vector3d axis = random_axis();
            const SpectralDecomp o = obs_from_axis(axis);
            const Matrix gram = gram_matrix(kernel, {1.0, -1.0}).cast<Complex>();
            // the eigenprojections of the observable are the maximizers
            row.closed_form = qmd_bitflip(o, eta, bloch_to_density(axis), gram);
            Povm clean;
            clean.outcomes = {1.0, -1.0};
            clean.effects = {HermMat(FieldTag::Complex, o.projectors[1]),
                             HermMat(FieldTag::Complex, o.projectors[0])};
            row.brute = brute_qmd_pure_search(clean, bitflip_povm(o, eta), gram, kSchattenInf,
                                              cfg.mesh_points)
                            .value;
        } else if (kind == "two_noisy") {
            const double eta_a = rng.uniform();
            const double eta_b = rng.uniform();
            const SpectralDecomp oa = obs_from_axis(random_axis());
            const SpectralDecomp ob = obs_from_axis(random_axis());
            const Matrix gram = gram_matrix(kernel, {1.0, -1.0}).cast<Complex>();
            const DensityMatrix mixed = bloch_to_density(0.3 * random_axis());
            row.closed_form = qmd_two_noisy(oa, ob, eta_a, eta_b, mixed, gram).bound;
            row.brute = brute_qmd_pure_search(bitflip_povm(oa, eta_a), bitflip_povm(ob, eta_b),
                                              gram, kSchattenInf, cfg.mesh_points)
                            .value;
        } else {
            // modular noise on a two-level number observable
            RealVector eta(2);
            eta(0) = rng.uniform();
            eta(1) = 1.0 - eta(0);
            Matrix num(2, 2);
            num << 0, 0, 0, 1;
            const SpectralDecomp n_obs = spectral(HermMat(FieldTag::Complex, num));
            const Matrix gram = gram_matrix(kernel, {0.0, 1.0}).cast<Complex>();
            const DensityMatrix mixed = bloch_to_density(0.4 * random_axis());
            row.closed_form = qmd_modular(n_obs, eta, mixed, gram).bound;
            row.brute = brute_qmd_pure_search(povm_from_spectral(n_obs),
                                              modular_noise_povm(n_obs, eta), gram, kSchattenInf,
                                              cfg.mesh_points)
                            .value;
        }
        res.max_abs_diff = std::max(res.max_abs_diff, std::abs(row.closed_form - row.brute));
        res.rows.push_back(std::move(row));
    }
    return res;
}

ConcentrationResult run_concentration(const ConcentrationConfig& cfg) {
    const Design design = qubit_bloch_design(
        {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()});
    const DensityMatrix rho = bloch_to_density(cfg.bloch);
    const DesignSampler sampler = DesignSampler::from_design(design, rho);
    const QuarkOperators ops = quark_operators(design, Kernel::zero_one(), sampler.exact());
    const QuarkPrecomp quark = QuarkPrecomp::from_ops(ops);
    const HermBasis& basis = design.basis();
    const RealVector rho_vec = basis.vectorize(rho.herm());

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<HermMat> directions;
    directions.emplace_back(FieldTag::Complex, Matrix(inv_sqrt2 * pauli_x()));
    directions.emplace_back(FieldTag::Complex, Matrix(inv_sqrt2 * pauli_y()));
    directions.emplace_back(FieldTag::Complex, Matrix(inv_sqrt2 * pauli_z()));
    directions.emplace_back(FieldTag::Complex, Matrix(0.5 * (pauli_x() + pauli_z())));
    directions.emplace_back(FieldTag::Complex,
                            Matrix((pauli_x() + pauli_y() + pauli_z()) / std::sqrt(6.0)));

    std::vector<RealVector> dir_vecs;
    for (const HermMat& s : directions) dir_vecs.push_back(basis.vectorize(s));

    // one pass over repetitions collecting the directional errors
    std::vector<std::vector<double>> proj(directions.size(),
                                          std::vector<double>(cfg.repetitions, 0.0));
    parallel_reps(cfg.repetitions, [&](int j) {
        Rng rng(substream_seed(cfg.seed, j));
        const CountsTable counts = sampler.draw(cfg.r, rng);
        const RealVector err = quark.fit_vec(counts) - rho_vec;
        for (std::size_t d = 0; d < dir_vecs.size(); ++d) proj[d][j] = err.dot(dir_vecs[d]);
    });

    ConcentrationResult res;
    const SuperOp sandwich = clt_covariance(ops, rho);
    for (std::size_t d = 0; d < directions.size(); ++d) {
        const double variance = dir_vecs[d].dot(sandwich.matrix * dir_vecs[d]) / cfg.r;
        const double sigma = std::sqrt(std::max(variance, 0.0));
        for (int ti = 1; ti <= cfg.t_points; ++ti) {
            const double t = 4.0 * sigma * ti / cfg.t_points;
            std::int64_t exceed = 0;
            for (double v : proj[d]) {
                if (v > t) ++exceed;
            }
            ConcentrationResult::Row row;
            row.direction = static_cast<int>(d);
            row.t = t;
            row.empirical = static_cast<double>(exceed) / cfg.repetitions;
            const ConcentrationBound bound =
                concentration_bound(ops, rho, directions[d], t, cfg.r);
            row.bennett = bound.bennett;
            row.bernstein = bound.bernstein;
            if (row.empirical > row.bennett) res.empirical_within_bennett = false;
            if (row.bennett > row.bernstein * (1.0 + 1e-12)) res.bennett_within_bernstein = false;
            res.rows.push_back(row);
        }
    }
    return res;
}

Kernel kernel_from_json(const Json& spec) {
    const std::string type = spec.at("type").get<std::string>();
    if (type == "zeroone") return Kernel::zero_one();
    if (type == "gaussian") return Kernel::gaussian(spec.at("bandwidth").get<double>());
    if (type == "polynomial") {
        return Kernel::polynomial(spec.at("degree").get<int>(), spec.at("offset").get<double>());
    }
    throw ConfigError("unknown kernel type '" + type + "'");
}

namespace {

RealVector eigenvalues_from_json(const Json& j) {
    RealVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
    if (v.minCoeff() < 0.0 || std::abs(v.sum() - 1.0) > 1e-9) {
        throw ConfigError("state eigenvalues must be non-negative and sum to 1");
    }
    return v;
}

template <typename T>
T require(const Json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("config: missing required key '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

void run_experiment(const Json& config, const std::filesystem::path& outdir) {
    if (config.value("schema", "") != "qst-config-v1") {
        throw ConfigError("config: unknown schema (expected qst-config-v1)");
    }
    std::filesystem::create_directories(outdir);
    const std::string kind = require<std::string>(config, "kind");
    const std::uint64_t seed = require<std::uint64_t>(config, "seed");
    const int reps = require<int>(config, "repetitions");

    if (kind == "rebit") {
        RebitConfig cfg;
        cfg.n = require<int>(config, "n");
        cfg.r = require<std::int64_t>(config, "r");
        cfg.repetitions = reps;
        cfg.seed = seed;
        cfg.purity = require<double>(config, "purity");
        cfg.theta = config.value("theta", 0.0);
        const RebitResult res = run_rebit(cfg);

        CsvWriter runs(outdir / "runs.csv", "qst-rebit-runs-v1", {"rep", "mse", "s_hat", "theta_hat"});
        for (int j = 0; j < cfg.repetitions; ++j) {
            runs.row({static_cast<double>(j), res.mse[j], res.s_hat[j], res.theta_hat[j]});
        }
        CsvWriter agg(outdir / "aggregate.csv", "qst-rebit-aggregate-v1",
                      {"mse_mean", "mse_stderr", "theory", "shrink_rate", "s_hat_min", "s_hat_max"});
        agg.row({res.mse_mean, res.mse_stderr, res.theory, res.shrink_rate, res.s_hat_min,
                 res.s_hat_max});

        // binned histograms; plotting is external
        auto histogram = [&](const std::string& name, const std::vector<double>& xs, double lo,
                             double hi, int bins) {
            std::vector<std::int64_t> count(bins, 0);
            for (double x : xs) {
                int b = static_cast<int>((x - lo) / (hi - lo) * bins);
                b = std::clamp(b, 0, bins - 1);
                ++count[b];
            }
            CsvWriter h(outdir / name, "qst-histogram-v1", {"bin_lo", "bin_hi", "count"});
            for (int b = 0; b < bins; ++b) {
                h.row({lo + (hi - lo) * b / bins, lo + (hi - lo) * (b + 1) / bins,
                       static_cast<double>(count[b])});
            }
        };
        histogram("histogram_s_hat.csv", res.s_hat, 0.0, 1.0, 50);
        histogram("histogram_theta_hat.csv", res.theta_hat, -M_PI, M_PI, 50);
    } else if (kind == "spectral") {
        SpectralConfig cfg;
        cfg.field = field_from_name(require<std::string>(config, "field"));
        cfg.q = require<int>(config, "q");
        cfg.n = require<int>(config, "n");
        cfg.r = require<std::int64_t>(config, "r");
        cfg.repetitions = reps;
        cfg.seed = seed;
        cfg.state_eigenvalues = eigenvalues_from_json(config.at("state_eigenvalues"));
        cfg.kernel = kernel_from_json(config.at("kernel"));
        const SpectralResult res = run_spectral(cfg);

        std::vector<std::string> cols = {"rep", "mse_lse", "mse_quark"};
        for (int i = 0; i < cfg.q; ++i) cols.push_back("eval_err_lse_" + std::to_string(i));
        for (int i = 0; i < cfg.q; ++i) cols.push_back("evec_err_lse_" + std::to_string(i));
        for (int i = 0; i < cfg.q; ++i) cols.push_back("eval_err_quark_" + std::to_string(i));
        for (int i = 0; i < cfg.q; ++i) cols.push_back("evec_err_quark_" + std::to_string(i));
        CsvWriter runs(outdir / "runs.csv", "qst-spectral-runs-v1", cols);
        for (int j = 0; j < cfg.repetitions; ++j) {
            std::vector<double> row = {static_cast<double>(j), res.mse_lse[j], res.mse_quark[j]};
            for (int i = 0; i < cfg.q; ++i) row.push_back(res.eval_err_lse[j](i));
            for (int i = 0; i < cfg.q; ++i) row.push_back(res.evec_err_lse[j](i));
            for (int i = 0; i < cfg.q; ++i) row.push_back(res.eval_err_quark[j](i));
            for (int i = 0; i < cfg.q; ++i) row.push_back(res.evec_err_quark[j](i));
            runs.row(row);
        }
        CsvWriter agg(outdir / "aggregate.csv", "qst-spectral-aggregate-v1",
                      {"mse_lse_mean", "mse_quark_mean"});
        agg.row({res.mse_lse_mean, res.mse_quark_mean});
    } else if (kind == "mse_vs_r") {
        MseVsRConfig cfg;
        cfg.field = field_from_name(require<std::string>(config, "field"));
        cfg.design = require<std::string>(config, "design");
        if (cfg.design == "haar") {
            cfg.q = require<int>(config, "q");
            cfg.n = require<int>(config, "n");
            if (config.contains("spectrum")) {
                const Json& sp = config.at("spectrum");
                cfg.spectrum = RealVector(sp.size());
                for (std::size_t i = 0; i < sp.size(); ++i) {
                    cfg.spectrum(i) = sp.at(i).get<double>();
                }
            }
        } else {
            cfg.k = require<int>(config, "k");
        }
        for (const Json& r : config.at("r_grid")) cfg.r_grid.push_back(r.get<std::int64_t>());
        cfg.repetitions = reps;
        cfg.seed = seed;
        cfg.state_eigenvalues = eigenvalues_from_json(config.at("state_eigenvalues"));
        cfg.state_haar_basis = config.value("state_haar_basis", false);
        for (const Json& kj : config.at("kernels")) {
            cfg.kernels.emplace_back(require<std::string>(kj, "name"), kernel_from_json(kj));
        }
        const MseVsRResult res = run_mse_vs_r(cfg);

        CsvWriter agg(outdir / "aggregate.csv", "qst-msevsr-aggregate-v1",
                      {"estimator", "r", "mse", "stderr", "theory", "slope"});
        for (const std::string& est : res.estimators) {
            for (std::size_t ri = 0; ri < res.r_grid.size(); ++ri) {
                agg.row({est, CsvWriter::format(static_cast<double>(res.r_grid[ri])),
                         CsvWriter::format(res.mse.at(est)[ri]),
                         CsvWriter::format(res.stderr_.at(est)[ri]),
                         CsvWriter::format(res.theory[ri]), CsvWriter::format(res.slope.at(est))});
            }
        }
    } else if (kind == "mub_vs_theory") {
        MubVsTheoryConfig cfg;
        for (const Json& kj : config.at("k_grid")) cfg.k_grid.push_back(kj.get<int>());
        cfg.r = require<std::int64_t>(config, "r");
        cfg.repetitions = reps;
        cfg.seed = seed;
        cfg.state_eigenvalues = eigenvalues_from_json(config.at("state_eigenvalues"));
        const MubVsTheoryResult res = run_mub_vs_theory(cfg);

        CsvWriter agg(outdir / "aggregate.csv", "qst-mub-aggregate-v1",
                      {"k", "mse_mean", "mse_stderr", "theory"});
        for (std::size_t i = 0; i < res.k_grid.size(); ++i) {
            agg.row({static_cast<double>(res.k_grid[i]), res.mse_mean[i], res.mse_stderr[i],
                     res.theory[i]});
        }
    } else if (kind == "qmd_noise") {
        QmdNoiseConfig cfg;
        cfg.configurations = config.value("configurations", 50);
        cfg.mesh_points = config.value("mesh_points", 10000);
        cfg.seed = seed;
        (void)reps;
        const QmdNoiseResult res = run_qmd_noise(cfg);
        CsvWriter runs(outdir / "runs.csv", "qst-qmd-runs-v1",
                       {"config", "kind", "closed_form", "brute", "abs_diff"});
        for (std::size_t i = 0; i < res.rows.size(); ++i) {
            runs.row({CsvWriter::format(static_cast<double>(i)), res.rows[i].kind,
                      CsvWriter::format(res.rows[i].closed_form),
                      CsvWriter::format(res.rows[i].brute),
                      CsvWriter::format(std::abs(res.rows[i].closed_form - res.rows[i].brute))});
        }
        CsvWriter agg(outdir / "aggregate.csv", "qst-qmd-aggregate-v1", {"max_abs_diff"});
        agg.row(std::vector<double>{res.max_abs_diff});
    } else if (kind == "concentration") {
        ConcentrationConfig cfg;
        const Json& bloch = config.at("bloch");
        cfg.bloch = Eigen::Vector3d(bloch.at(0).get<double>(), bloch.at(1).get<double>(),
                                    bloch.at(2).get<double>());
        cfg.r = require<std::int64_t>(config, "r");
        cfg.repetitions = reps;
        cfg.seed = seed;
        cfg.t_points = config.value("t_points", 12);
        const ConcentrationResult res = run_concentration(cfg);
        CsvWriter agg(outdir / "aggregate.csv", "qst-concentration-v1",
                      {"direction", "t", "empirical", "bennett", "bernstein"});
        for (const ConcentrationResult::Row& row : res.rows) {
            agg.row({static_cast<double>(row.direction), row.t, row.empirical, row.bennett,
                     row.bernstein});
        }
    } else {
        throw ConfigError("config: unknown experiment kind '" + kind + "'");
    }
}

}  // namespace qst
