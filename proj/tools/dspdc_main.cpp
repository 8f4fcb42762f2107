#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dspdc/errors.hpp"
#include "dspdc/experiment.hpp"
#include "dspdc/instances.hpp"
#include "dspdc/metrics.hpp"
#include "dspdc/problem.hpp"
#include "dspdc/version.hpp"

namespace {

std::vector<std::size_t> parse_checkpoint_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string tok = text.substr(start, comma - start);
        if (!tok.empty()) out.push_back(std::stoull(tok));
        start = comma + 1;
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw dspdc::config_error("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Doubly stochastic primal-dual coordinate solver experiments"};
    app.set_version_flag("--version", dspdc::kVersion);
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run an experiment configuration");
    std::string run_config;
    run->add_option("config", run_config, "experiment config (JSON)")->required();
    std::uint64_t run_seed = 0;
    auto* run_seed_opt = run->add_option("--seed", run_seed, "override base_seed");
    std::size_t run_max_iters = 0;
    auto* run_iters_opt = run->add_option("--max-iters", run_max_iters, "override max_iters");
    std::string run_checkpoints;
    auto* run_cp_opt = run->add_option("--checkpoints", run_checkpoints,
                                       "override checkpoints (comma-separated iterations)");
    std::string run_out;
    auto* run_out_opt = run->add_option("--out", run_out, "override output_dir");

    // verify
    auto* verify = app.add_subcommand("verify", "Check the convergence guarantees empirically");
    std::string verify_config;
    verify->add_option("config", verify_config, "verification config (JSON)")->required();
    std::string verify_out;
    auto* verify_out_opt = verify->add_option("--out", verify_out, "write the JSON report here");
    std::uint64_t verify_seed = 0;
    auto* verify_seed_opt = verify->add_option("--seed", verify_seed, "override base_seed");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a problem file");
    std::string gen_name;
    gen->add_option("generator", gen_name,
                    "synthetic | lower_bound | matrix_risk | factorized | factorized_reduced")
        ->required();
    std::string gen_out;
    gen->add_option("-o,--out", gen_out, "output problem file")->required();
    std::size_t g_n = 0, g_p = 0, g_d = 0;
    double g_q_cond = 0.0, g_lambda = 0.0, g_lambda1 = 0.0, g_lambda2 = 0.0;
    std::uint64_t g_seed = 0;
    std::string g_base;
    gen->add_option("--n", g_n, "rows / instances");
    gen->add_option("--p", g_p, "columns / feature blocks");
    gen->add_option("--d", g_d, "inner dimension / matrix side");
    gen->add_option("--Q", g_q_cond, "conditioning parameter (lower_bound)");
    gen->add_option("--lambda", g_lambda, "regularization modulus");
    gen->add_option("--lambda1", g_lambda1, "l1 weight (synthetic)");
    gen->add_option("--lambda2", g_lambda2, "l2 weight (synthetic)");
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--base", g_base, "base problem file (factorized variants)");

    // reference
    auto* refc = app.add_subcommand("reference", "Certify a reference solution");
    std::string ref_problem;
    refc->add_option("problem", ref_problem, "problem file (JSON)")->required();
    std::string ref_out;
    auto* ref_out_opt = refc->add_option("--out", ref_out, "write the solution here");
    std::size_t ref_max_iters = 0;
    auto* ref_iters_opt = refc->add_option("--max-iters", ref_max_iters,
                                           "certification iteration budget");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            nlohmann::json doc;
            {
                std::ifstream in(run_config);
                if (!in) throw dspdc::config_error("cannot open '" + run_config + "'");
                doc = nlohmann::json::parse(in);
            }
            if (run_seed_opt->count()) doc["base_seed"] = run_seed;
            if (run_iters_opt->count()) doc["max_iters"] = run_max_iters;
            if (run_cp_opt->count())
                doc["checkpoints"] = {{"kind", "list"},
                                      {"iterations", parse_checkpoint_list(run_checkpoints)}};
            if (run_out_opt->count()) doc["output_dir"] = run_out;
            const auto cfg = dspdc::parse_experiment_config(doc);
            const auto result = dspdc::run_experiment(cfg);
            for (const auto& path : result.csv_paths) std::cout << "wrote " << path << "\n";
            std::cout << "wrote " << result.manifest_path << "\n";
            return 0;
        }

        if (*verify) {
            nlohmann::json doc;
            {
                std::ifstream in(verify_config);
                if (!in) throw dspdc::config_error("cannot open '" + verify_config + "'");
                doc = nlohmann::json::parse(in);
            }
            if (verify_seed_opt->count()) doc["base_seed"] = verify_seed;
            const auto cfg = dspdc::parse_verify_config(doc);
            const nlohmann::json report = dspdc::verify_theorems(cfg);
            for (const char* key : {"theorem1", "theorem2"}) {
                for (const auto& row : report.at(key).at("checkpoints")) {
                    std::printf("%s t=%zu mean=%.6g bound=%.6g ratio=%.4g %s\n", key,
                                row.at("iteration").get<std::size_t>(),
                                row.contains("mean_omega") ? row.at("mean_omega").get<double>()
                                                           : row.at("mean_gap").get<double>(),
                                row.at("bound").get<double>(), row.at("ratio").get<double>(),
                                row.at("pass").get<bool>() ? "PASS" : "FAIL");
                }
            }
            const bool pass = report.at("pass").get<bool>();
            std::printf("overall: %s\n", pass ? "PASS" : "FAIL");
            if (verify_out_opt->count()) write_text(verify_out, report.dump(2) + "\n");
            return pass ? 0 : 2;
        }

        if (*gen) {
            nlohmann::json spec{{"generator", gen_name}};
            if (gen_name == "synthetic") {
                spec["n"] = g_n;
                spec["p"] = g_p;
                spec["lambda1"] = g_lambda1;
                spec["lambda2"] = g_lambda2;
                spec["seed"] = g_seed;
            } else if (gen_name == "lower_bound") {
                spec["n"] = g_n;
                spec["Q"] = g_q_cond;
            } else if (gen_name == "matrix_risk") {
                spec["n"] = g_n;
                spec["p"] = g_p;
                spec["d"] = g_d;
                spec["lambda"] = g_lambda;
                spec["seed"] = g_seed;
            } else if (gen_name == "factorized" || gen_name == "factorized_reduced") {
                if (g_base.empty())
                    throw dspdc::config_error("gen " + gen_name + ": --base is required");
                spec["base"] = {{"path", g_base}};
                spec["d"] = g_d;
                spec["seed"] = g_seed;
            } else {
                throw dspdc::config_error("gen: unknown generator '" + gen_name + "'");
            }
            const dspdc::Problem prob = dspdc::instantiate(spec);
            dspdc::save_problem(prob, gen_out);
            std::cout << "wrote " << gen_out << "\n";
            return 0;
        }

        // reference
        const dspdc::Problem prob = dspdc::load_problem(ref_problem);
        dspdc::CertifyOptions copts;
        if (ref_iters_opt->count()) copts.max_iters = ref_max_iters;
        const dspdc::ReferenceSolution ref = dspdc::certify_reference(prob, copts);
        char hex[24];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(ref.provenance_hash));
        std::printf("source=%s gap_at_certification=%.17g provenance_hash=%s\n",
                    ref.source.c_str(), ref.gap_at_certification, hex);
        if (ref_out_opt->count()) {
            const nlohmann::json j{{"format", "dspdc-reference"},
                                   {"version", 1},
                                   {"source", ref.source},
                                   {"gap_at_certification", ref.gap_at_certification},
                                   {"provenance_hash", hex},
                                   {"x", ref.point.x},
                                   {"y", ref.point.y}};
            write_text(ref_out, j.dump(2) + "\n");
        }
        return 0;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: invalid JSON: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
