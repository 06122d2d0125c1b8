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

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "qst/estimators.hpp"
#include "qst/io.hpp"
#include "qst/mub.hpp"
#include "qst/psd_projection.hpp"
#include "qst/simlab.hpp"

namespace {

using namespace qst;

Kernel parse_kernel(const std::string& spec) {
    std::stringstream ss(spec);
    std::string head;
    std::getline(ss, head, ':');
    if (head == "zeroone") return Kernel::zero_one();
    if (head == "gaussian") {
        std::string c;
        if (!std::getline(ss, c, ':')) throw ConfigError("gaussian kernel needs a bandwidth");
        return Kernel::gaussian(std::stod(c));
    }
    if (head == "poly") {
        std::string d, c0;
        if (!std::getline(ss, d, ':') || !std::getline(ss, c0, ':')) {
            throw ConfigError("poly kernel spec is poly:<degree>:<offset>");
        }
        return Kernel::polynomial(std::stoi(d), std::stod(c0));
    }
    throw ConfigError("unknown kernel spec '" + spec + "'");
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

Eigen::Vector3d parse_vec3(const std::string& csv) {
    const std::vector<double> v = parse_doubles(csv);
    if (v.size() != 3) throw ConfigError("expected three comma-separated coordinates");
    return {v[0], v[1], v[2]};
}

DensityMatrix state_from_bloch_string(const std::string& csv) {
    return bloch_to_density(parse_vec3(csv));
}

int axis_index(const std::string& name) {
    if (name == "x") return 0;
    if (name == "y") return 1;
    if (name == "z") return 2;
    throw ConfigError("axis must be x, y or z");
}

SpectralDecomp number_observable(int q) {
    Matrix num = Matrix::Zero(q, q);
    for (int k = 0; k < q; ++k) num(k, k) = k;
    return spectral(HermMat(FieldTag::Complex, std::move(num)));
}

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        save_json(j, out_path);
    }
}

int run(int argc, char** argv) {
    CLI::App app{"qst: tomography designs, estimators and simulation studies"};
    app.require_subcommand(1);

    // ---- design ----
    CLI::App* design = app.add_subcommand("design", "generate or inspect measurement designs");
    design->require_subcommand(1);

    CLI::App* gen = design->add_subcommand("gen", "generate a design file");
    std::string gen_kind, gen_field = "complex", gen_out, gen_vectors;
    int gen_q = 2, gen_n = 10, gen_k = 1;
    std::uint64_t gen_seed = 0;
    bool gen_identity = false;
    gen->add_option("--kind", gen_kind, "haar | mub | pauli | bloch")->required();
    gen->add_option("--q", gen_q, "Hilbert space dimension (haar)");
    gen->add_option("--field", gen_field, "real | complex (haar)");
    gen->add_option("--n", gen_n, "number of observables (haar)");
    gen->add_option("--seed", gen_seed, "random seed (haar)");
    gen->add_option("--k", gen_k, "number of qubits (mub, pauli)");
    gen->add_flag("--include-identity", gen_identity, "include identity slots (pauli)");
    gen->add_option("--vectors", gen_vectors, "semicolon-separated Bloch vectors (bloch)");
    gen->add_option("--out", gen_out, "output design file")->required();

    CLI::App* check = design->add_subcommand("check", "verify completeness and design constants");
    std::string check_path;
    double check_tol = 1e-8;
    check->add_option("design", check_path, "design JSON file")->required();
    check->add_option("--tol", check_tol, "unitary design tolerance");

    // ---- estimate ----
    CLI::App* estimate = app.add_subcommand("estimate", "fit a state from counts");
    estimate->require_subcommand(1);
    std::string est_design, est_counts, est_out, est_kernel = "zeroone";
    bool est_project = false;
    CLI::App* lse_cmd = estimate->add_subcommand("lse", "tensorized least squares");
    CLI::App* quark_cmd = estimate->add_subcommand("quark", "kernel regression");
    for (CLI::App* sub : {lse_cmd, quark_cmd}) {
        sub->add_option("--design", est_design, "design JSON file")->required();
        sub->add_option("--counts", est_counts, "counts JSON file")->required();
        sub->add_option("--out", est_out, "output JSON file (stdout if omitted)");
        sub->add_flag("--project", est_project, "project onto the density matrix set");
    }
    quark_cmd->add_option("--kernel", est_kernel, "zeroone | gaussian:<c> | poly:<d>:<offset>");

    // ---- simulate ----
    CLI::App* simulate = app.add_subcommand("simulate", "run a config-driven experiment");
    std::string sim_config, sim_out;
    simulate->add_option("--config", sim_config, "experiment config JSON")->required();
    simulate->add_option("--out", sim_out, "output directory")->required();

    // ---- qmd ----
    CLI::App* qmd = app.add_subcommand("qmd", "quantum maximum discrepancy closed forms");
    qmd->require_subcommand(1);
    std::string qmd_kernel = "zeroone", qmd_bloch = "0,0,0";

    CLI::App* qmd_pauli_cmd = qmd->add_subcommand("pauli", "two ideal Pauli measurements");
    std::string pauli_i = "x", pauli_j = "z";
    qmd_pauli_cmd->add_option("--i", pauli_i, "first axis");
    qmd_pauli_cmd->add_option("--j", pauli_j, "second axis");

    CLI::App* qmd_flip_cmd = qmd->add_subcommand("bitflip", "ideal versus bit-flipped");
    std::string flip_axis = "0,0,1";
    double flip_eta = 0.1;
    qmd_flip_cmd->add_option("--axis", flip_axis, "observable Bloch axis");
    qmd_flip_cmd->add_option("--eta", flip_eta, "flip probability");

    CLI::App* qmd_two_cmd = qmd->add_subcommand("two-noisy", "two noisy observables");
    std::string two_axis_a = "0,0,1", two_axis_b = "1,0,0";
    double two_eta_a = 0.0, two_eta_b = 0.0;
    qmd_two_cmd->add_option("--axis-a", two_axis_a, "first Bloch axis");
    qmd_two_cmd->add_option("--axis-b", two_axis_b, "second Bloch axis");
    qmd_two_cmd->add_option("--eta-a", two_eta_a, "first flip probability");
    qmd_two_cmd->add_option("--eta-b", two_eta_b, "second flip probability");

    CLI::App* qmd_mod_cmd = qmd->add_subcommand("modular", "modular additive noise on a qudit");
    std::string mod_eta = "0.8,0.1,0.1", mod_diag;
    qmd_mod_cmd->add_option("--eta", mod_eta, "noise distribution over Z_q");
    qmd_mod_cmd->add_option("--diag", mod_diag, "diagonal state probabilities (default basis 0)");

    for (CLI::App* sub : {qmd_pauli_cmd, qmd_flip_cmd, qmd_two_cmd, qmd_mod_cmd}) {
        sub->add_option("--kernel", qmd_kernel, "zeroone | gaussian:<c> | poly:<d>:<offset>");
    }
    for (CLI::App* sub : {qmd_pauli_cmd, qmd_flip_cmd, qmd_two_cmd}) {
        sub->add_option("--bloch", qmd_bloch, "input state Bloch vector");
    }

    // ---- spta ----
    CLI::App* spta_cmd = app.add_subcommand("spta", "sum-preserving threshold step");
    std::string spta_input;
    spta_cmd->add_option("--input", spta_input, "JSON file with a values array")->required();

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        if (gen_kind == "haar") {
            const FieldTag field = field_from_name(gen_field);
            RealVector spectrum(gen_q);
            for (int i = 0; i < gen_q; ++i) spectrum(i) = i;
            Matrix m = spectrum.cast<Complex>().asDiagonal();
            const Design d = haar_random_design(field, gen_q, gen_n, gen_seed,
                                                spectral(HermMat(field, std::move(m))));
            save_design(d, gen_out);
        } else if (gen_kind == "mub") {
            save_design(MubDesign(gen_k).to_design(), gen_out);
        } else if (gen_kind == "pauli") {
            save_design(pauli_tensor_design(gen_k, gen_identity), gen_out);
        } else if (gen_kind == "bloch") {
            std::vector<Eigen::Vector3d> vecs;
            std::stringstream ss(gen_vectors);
            std::string one;
            while (std::getline(ss, one, ';')) vecs.push_back(parse_vec3(one));
            save_design(qubit_bloch_design(vecs), gen_out);
        } else {
            throw ConfigError("unknown design kind '" + gen_kind + "'");
        }
        return 0;
    }

    if (check->parsed()) {
        const Design d = load_design(check_path);
        const CompletenessReport comp = check_complete(d);
        const UnitaryDesignReport rep = check_unitary_design(d, check_tol);
        std::printf("observables: %d  q: %d  field: %s  q_bar: %.6g\n", d.size(), d.q(),
                    field_name(d.field()).c_str(), d.q_bar());
        std::printf("complete: %s  null_space_dim: %d\n", comp.complete ? "yes" : "no",
                    comp.null_space_dim);
        std::printf("unitary_design: %s  alpha = %.12g  alpha_theory = %.12g  deviation = %.3e\n",
                    rep.is_unitary ? "yes" : "no", rep.alpha_hat, rep.alpha_theory, rep.deviation);
        return 0;
    }

    if (lse_cmd->parsed() || quark_cmd->parsed()) {
        const Design d = load_design(est_design);
        const CountsTable counts = load_counts(est_counts);
        Json out;
        out["schema"] = "qst-estimate-v1";
        out["q"] = d.q();
        out["field"] = field_name(d.field());
        HermMat rho_hat = HermMat::zero(d.field(), d.q());
        if (lse_cmd->parsed()) {
            const LseResult res = lse_fit(d, counts);
            rho_hat = res.rho_hat;
            out["estimator"] = "lse";
            out["loss"] = res.loss;
            out["used_closed_form"] = res.used_closed_form;
            out["null_space_dim"] = res.null_space_dim;
        } else {
            const Kernel kernel = parse_kernel(est_kernel);
            const QuarkResult res = quark_fit(quark_operators(d, kernel, counts));
            rho_hat = res.rho_hat;
            out["estimator"] = "quark";
            out["kernel"] = est_kernel;
            out["lagrange_lambda"] = res.lagrange_lambda;
            out["superop_condition"] = res.superop_condition;
        }
        if (est_project) {
            const DensityMatrix projected = project_to_density(rho_hat);
            out["projected"] = true;
            rho_hat = projected.herm();
        }
        out["rho_hat"] = herm_to_json(rho_hat);
        emit(out, est_out);
        return 0;
    }

    if (simulate->parsed()) {
        run_experiment(load_json(sim_config), sim_out);
        std::printf("wrote %s\n", sim_out.c_str());
        return 0;
    }

    if (qmd_pauli_cmd->parsed()) {
        const Kernel kernel = parse_kernel(qmd_kernel);
        const Matrix gram = gram_matrix(kernel, {1.0, -1.0}).cast<Complex>();
        const double value = qmd_pauli(axis_index(pauli_i), axis_index(pauli_j),
                                       state_from_bloch_string(qmd_bloch), gram);
        std::printf("qmd = %.12g\n", value);
        return 0;
    }
    if (qmd_flip_cmd->parsed()) {
        const Kernel kernel = parse_kernel(qmd_kernel);
        const Matrix gram = gram_matrix(kernel, {1.0, -1.0}).cast<Complex>();
        const Eigen::Vector3d u = parse_vec3(flip_axis).normalized();
        const Matrix m = u.x() * pauli_x() + u.y() * pauli_y() + u.z() * pauli_z();
        const double value = qmd_bitflip(spectral(HermMat(FieldTag::Complex, m)), flip_eta,
                                         state_from_bloch_string(qmd_bloch), gram);
        std::printf("qmd = %.12g\n", value);
        return 0;
    }
    if (qmd_two_cmd->parsed()) {
        const Kernel kernel = parse_kernel(qmd_kernel);
        const Matrix gram = gram_matrix(kernel, {1.0, -1.0}).cast<Complex>();
        auto obs = [](const Eigen::Vector3d& u) {
            const Matrix m = u.x() * pauli_x() + u.y() * pauli_y() + u.z() * pauli_z();
            return spectral(HermMat(FieldTag::Complex, m));
        };
        const QmdTwoNoisyResult res =
            qmd_two_noisy(obs(parse_vec3(two_axis_a).normalized()),
                          obs(parse_vec3(two_axis_b).normalized()), two_eta_a, two_eta_b,
                          state_from_bloch_string(qmd_bloch), gram);
        std::printf("qmd = %.12g  bound = %.12g\n", res.value, res.bound);
        return 0;
    }
    if (qmd_mod_cmd->parsed()) {
        const Kernel kernel = parse_kernel(qmd_kernel);
        const std::vector<double> eta_values = parse_doubles(mod_eta);
        const int q = static_cast<int>(eta_values.size());
        RealVector eta(q);
        for (int i = 0; i < q; ++i) eta(i) = eta_values[i];
        std::vector<double> outcomes(q);
        for (int i = 0; i < q; ++i) outcomes[i] = i;
        const Matrix gram = gram_matrix(kernel, outcomes).cast<Complex>();
        Matrix rho_m = Matrix::Zero(q, q);
        if (mod_diag.empty()) {
            rho_m(0, 0) = 1.0;
        } else {
            const std::vector<double> diag = parse_doubles(mod_diag);
            if (static_cast<int>(diag.size()) != q) {
                throw ConfigError("--diag length must match --eta length");
            }
            for (int i = 0; i < q; ++i) rho_m(i, i) = diag[i];
        }
        const QmdModularResult res =
            qmd_modular(number_observable(q), eta,
                        DensityMatrix(HermMat(FieldTag::Complex, std::move(rho_m))), gram);
        std::printf("qmd = %.12g  bound = %.12g  argmax_index = %d\n", res.value, res.bound,
                    res.argmax_index);
        return 0;
    }

    if (spta_cmd->parsed()) {
        const Json j = load_json(spta_input);
        const Json& arr = j.is_array() ? j : j.at("values");
        RealVector a(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) a(i) = arr.at(i).get<double>();
        const RealVector b = spta(a);
        Json out = Json::array();
        for (int i = 0; i < b.size(); ++i) out.push_back(b(i));
        std::cout << out.dump() << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
