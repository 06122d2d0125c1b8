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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qst/simlab.hpp"

using namespace qst;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("rebit experiment tracks the closed-form law") {
    RebitConfig cfg;
    cfg.n = 100;
    cfg.r = 50;
    cfg.repetitions = 3000;
    cfg.seed = 90210;
    cfg.purity = 0.8;
    const RebitResult res = run_rebit(cfg);
    CHECK(res.theory == doctest::Approx(2.72e-4));
    CHECK(std::abs(res.mse_mean - res.theory) < 0.1 * res.theory);
    CHECK(res.shrink_rate < 0.01);
    CHECK(res.s_hat_min > 0.5);
    CHECK(res.s_hat_max < 1.0);
}

TEST_CASE("rebit experiment is deterministic per seed") {
    RebitConfig cfg;
    cfg.n = 20;
    cfg.r = 25;
    cfg.repetitions = 64;
    cfg.seed = 7;
    const RebitResult a = run_rebit(cfg);
    const RebitResult b = run_rebit(cfg);
    CHECK(a.mse == b.mse);
    CHECK(a.s_hat == b.s_hat);
}

TEST_CASE("spectral experiment produces ordered errors") {
    SpectralConfig cfg;
    cfg.q = 4;
    cfg.n = 30;
    cfg.r = 50;
    cfg.repetitions = 40;
    cfg.seed = 11;
    cfg.state_eigenvalues = RealVector(4);
    cfg.state_eigenvalues << 0.4, 0.3, 0.2, 0.1;
    const SpectralResult res = run_spectral(cfg);
    CHECK(res.eval_err_lse.size() == 40);
    CHECK(res.mse_lse_mean > 0.0);
    CHECK(res.mse_quark_mean > 0.0);
    for (int j = 0; j < 40; ++j) {
        CHECK(res.eval_err_lse[j].size() == 4);
        CHECK(res.eval_err_lse[j].minCoeff() >= 0.0);
    }
}

TEST_CASE("mse_vs_r yields the expected decay") {
    MseVsRConfig cfg;
    cfg.design = "mub";
    cfg.k = 2;
    cfg.r_grid = {8, 32, 128, 512};
    cfg.repetitions = 60;
    cfg.seed = 5150;
    cfg.state_eigenvalues = RealVector(4);
    cfg.state_eigenvalues << 0.5, 0.3, 0.2, 0.0;
    cfg.state_haar_basis = true;
    cfg.kernels = {{"gauss1", Kernel::gaussian(1.0)}};
    const MseVsRResult res = run_mse_vs_r(cfg);
    CHECK(res.slope.at("lse") < -0.7);
    CHECK(res.slope.at("gauss1") < -0.7);
    // the LSE tracks the closed form under the exact unitary design
    for (std::size_t i = 0; i < res.r_grid.size(); ++i) {
        CHECK(std::abs(res.mse.at("lse")[i] - res.theory[i]) <
              0.3 * res.theory[i] + 3.0 * res.stderr_.at("lse")[i]);
    }
}

TEST_CASE("mub_vs_theory stays near the closed form") {
    MubVsTheoryConfig cfg;
    cfg.k_grid = {2, 3, 6};
    cfg.r = 256;
    cfg.repetitions = 20;
    cfg.seed = 31337;
    cfg.state_eigenvalues = RealVector(3);
    cfg.state_eigenvalues << 0.5, 0.3, 0.2;
    const MubVsTheoryResult res = run_mub_vs_theory(cfg);
    for (std::size_t i = 0; i < res.k_grid.size(); ++i) {
        CHECK(std::abs(res.mse_mean[i] - res.theory[i]) <
              0.15 * res.theory[i] + 3.0 * res.mse_stderr[i]);
    }
}

TEST_CASE("qmd noise study stays within the mesh tolerance") {
    QmdNoiseConfig cfg;
    cfg.configurations = 12;
    cfg.seed = 404;
    cfg.mesh_points = 6000;
    const QmdNoiseResult res = run_qmd_noise(cfg);
    CHECK(res.rows.size() == 12);
    CHECK(res.max_abs_diff < 1.5e-3);
}

TEST_CASE("concentration bounds hold structurally") {
    ConcentrationConfig cfg;
    cfg.repetitions = 20000;
    cfg.r = 100;
    cfg.seed = 8086;
    cfg.t_points = 8;
    const ConcentrationResult res = run_concentration(cfg);
    CHECK(res.bennett_within_bernstein);
    CHECK(res.empirical_within_bennett);
    for (const auto& row : res.rows) {
        CHECK(row.bennett <= 1.0 + 1e-12);
        CHECK(row.empirical >= 0.0);
    }
}

TEST_CASE("run_experiment writes deterministic csv files") {
    Json cfg;
    cfg["schema"] = "qst-config-v1";
    cfg["kind"] = "rebit";
    cfg["seed"] = 42;
    cfg["repetitions"] = 128;
    cfg["n"] = 16;
    cfg["r"] = 25;
    cfg["purity"] = 0.8;

    const auto dir_a = std::filesystem::temp_directory_path() / "qst_test_run_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "qst_test_run_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    run_experiment(cfg, dir_a);
    run_experiment(cfg, dir_b);
    for (const char* name : {"runs.csv", "aggregate.csv", "histogram_s_hat.csv"}) {
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }
    const std::string runs = slurp(dir_a / "runs.csv");
    CHECK(runs.rfind("schema,", 0) == 0);
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("design and counts files round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "qst_io_roundtrip";
    std::filesystem::create_directories(dir);

    const Design d = qubit_bloch_design(
        {Eigen::Vector3d(0.3, 0.4, 0.5).normalized(), Eigen::Vector3d::UnitZ()});
    save_design(d, dir / "design.json");
    const Design back = load_design(dir / "design.json");
    REQUIRE(back.size() == d.size());
    CHECK(back.q() == d.q());
    CHECK((back.gram_superop().matrix - d.gram_superop().matrix).cwiseAbs().maxCoeff() < 1e-9);

    CountsTable counts;
    counts.shots = 48;
    counts.rows.push_back({{30, 18}, (RealVector(2) << 30.0 / 48, 18.0 / 48).finished()});
    counts.rows.push_back({{24, 24}, (RealVector(2) << 0.5, 0.5).finished()});
    save_counts(counts, dir / "counts.json");
    const CountsTable counts_back = load_counts(dir / "counts.json");
    REQUIRE(counts_back.num_observables() == 2);
    CHECK(counts_back.shots == 48);
    CHECK(counts_back.rows[0].counts == counts.rows[0].counts);
    CHECK((counts_back.rows[1].probs - counts.rows[1].probs).cwiseAbs().maxCoeff() == 0.0);

    // exact-probability sentinel
    CountsTable exact;
    exact.shots = 0;
    exact.rows.push_back({{}, (RealVector(2) << 0.25, 0.75).finished()});
    save_counts(exact, dir / "exact.json");
    CHECK(load_counts(dir / "exact.json").exact());

    // schema rejection
    Json bad;
    bad["schema"] = "qst-design-v999";
    CHECK_THROWS_AS(design_from_json(bad), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config validation") {
    Json cfg;
    cfg["schema"] = "qst-config-v1";
    cfg["kind"] = "rebit";
    cfg["seed"] = 1;
    cfg["repetitions"] = 4;
    // missing n / r / purity
    CHECK_THROWS_AS(run_experiment(cfg, std::filesystem::temp_directory_path() / "qst_bad"),
                    ConfigError);
    Json unknown = cfg;
    unknown["kind"] = "mystery";
    CHECK_THROWS_AS(run_experiment(unknown, std::filesystem::temp_directory_path() / "qst_bad"),
                    ConfigError);
}
