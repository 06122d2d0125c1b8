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

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qst/estimators.hpp"
#include "qst/io.hpp"
#include "qst/kernels.hpp"
#include "qst/mub.hpp"

namespace qst {

/// Monte Carlo study of the rebit design with uniformly spaced angles.
/// Repetition j draws from the substream (seed, j); parallel and serial runs
/// produce identical records.
struct RebitConfig {
    int n = 0;
    std::int64_t r = 0;
    int repetitions = 0;
    std::uint64_t seed = 0;
    double purity = 0.8;  // s
    double theta = 0.0;
};

struct RebitResult {
    std::vector<double> mse;        // per repetition, unprojected LSE
    std::vector<double> s_hat;      // after radial shrinkage
    std::vector<double> theta_hat;
    double mse_mean = 0.0;
    double mse_stderr = 0.0;
    double theory = 0.0;  // (2/nr)(1 - s^2/2)
    double shrink_rate = 0.0;
    double s_hat_min = 0.0;
    double s_hat_max = 0.0;
};

RebitResult run_rebit(const RebitConfig& cfg);

/// Spectral error study: LSE and QUARK eigenpair errors under a Haar design.
struct SpectralConfig {
    FieldTag field = FieldTag::Complex;
    int q = 8;
    int n = 100;
    std::int64_t r = 50;
    int repetitions = 1000;
    std::uint64_t seed = 0;
    RealVector state_eigenvalues;  // descending, sums to 1; canonical basis
    Kernel kernel = Kernel::gaussian(1.0);
};

struct SpectralResult {
    // per repetition: q eigenvalue errors and q eigenvector errors per estimator
    std::vector<RealVector> eval_err_lse, evec_err_lse, eval_err_quark, evec_err_quark;
    std::vector<double> mse_lse, mse_quark;
    double mse_lse_mean = 0.0, mse_quark_mean = 0.0;
};

SpectralResult run_spectral(const SpectralConfig& cfg);

/// MSE decay versus shots per observable for the LSE and QUARK estimators.
struct MseVsRConfig {
    FieldTag field = FieldTag::Complex;
    int q = 8;
    std::string design;  // "haar" or "mub"
    int n = 100;         // haar only; mub uses q + 1
    int k = 3;           // mub only
    RealVector spectrum;  // haar seed spectrum (outcome labels); default 0..q-1
    std::vector<std::int64_t> r_grid;
    int repetitions = 200;
    std::uint64_t seed = 0;
    RealVector state_eigenvalues;
    bool state_haar_basis = false;
    std::vector<std::pair<std::string, Kernel>> kernels;  // QUARK variants
};

struct MseVsRResult {
    std::vector<std::string> estimators;             // "lse" first, then kernels
    std::map<std::string, std::vector<double>> mse;  // per estimator, over r_grid
    std::map<std::string, std::vector<double>> stderr_;
    std::map<std::string, double> slope;  // log-log fit over the grid
    std::vector<double> theory;           // rank-1 unitary closed form per r
    std::vector<std::int64_t> r_grid;
};

MseVsRResult run_mse_vs_r(const MseVsRConfig& cfg);

/// MUB reconstruction MSE against the closed-form law across qubit counts.
struct MubVsTheoryConfig {
    std::vector<int> k_grid;
    std::int64_t r = 0;
    int repetitions = 20;
    std::uint64_t seed = 0;
    RealVector state_eigenvalues;  // padded/truncated per k, Haar eigenbasis
};

struct MubVsTheoryResult {
    std::vector<int> k_grid;
    std::vector<double> mse_mean;
    std::vector<double> mse_stderr;
    std::vector<double> theory;
};

MubVsTheoryResult run_mub_vs_theory(const MubVsTheoryConfig& cfg);

/// Closed-form QMD values against the pure-state mesh oracle on seeded
/// random configurations.
struct QmdNoiseConfig {
    int configurations = 50;
    std::uint64_t seed = 0;
    int mesh_points = 10000;
};

struct QmdNoiseResult {
    struct Row {
        std::string kind;
        double closed_form = 0.0;
        double brute = 0.0;
    };
    std::vector<Row> rows;
    double max_abs_diff = 0.0;
};

QmdNoiseResult run_qmd_noise(const QmdNoiseConfig& cfg);

/// Empirical tail frequencies of directional errors against the Bennett and
/// Bernstein bounds (qubit Pauli design, 0-1 kernel).
struct ConcentrationConfig {
    Eigen::Vector3d bloch = Eigen::Vector3d(0.3, 0.2, 0.5);
    std::int64_t r = 100;
    int repetitions = 100000;
    std::uint64_t seed = 0;
    int t_points = 12;  // grid over (0, 4 sigma]
};

struct ConcentrationResult {
    struct Row {
        int direction = 0;
        double t = 0.0;
        double empirical = 0.0;
        double bennett = 1.0;
        double bernstein = 1.0;
    };
    std::vector<Row> rows;
    bool empirical_within_bennett = true;
    bool bennett_within_bernstein = true;
};

ConcentrationResult run_concentration(const ConcentrationConfig& cfg);

/// Config-driven entry point: parses a qst-config-v1 JSON document, runs the
/// experiment and emits runs.csv / aggregate.csv (plus histogram files where
/// applicable) into the output directory.
void run_experiment(const Json& config, const std::filesystem::path& outdir);

Kernel kernel_from_json(const Json& spec);

}  // namespace qst
