#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dspdc/metrics.hpp"
#include "dspdc/problem.hpp"
#include "dspdc/solver.hpp"

namespace dspdc {

// One solver entry in an experiment configuration.
struct SolverSpec {
    std::string name;              // "dspdc" | "spdc" | "sdca"
    std::size_t q = 1, m = 1;      // q ignored for spdc (uses p) and sdca
    ThetaMode mode = ThetaMode::distance;
    LambdaPolicy lambda_policy = LambdaPolicy::heuristic;
    std::optional<double> theta_override;  // re-validated; inconsistent values rejected
    std::string label;                     // output file stem, defaults to name
};

struct CheckpointSchedule {
    enum class Kind { linear, geometric, list };
    Kind kind = Kind::linear;
    std::size_t stride = 0;               // linear
    std::size_t first = 1;                // geometric
    double factor = 2.0;                  // geometric, > 1
    std::vector<std::size_t> iterations;  // list (used verbatim)

    // Concrete strictly increasing checkpoint iterations. linear/geometric
    // always end at max_iters; an explicit list is used as given.
    std::vector<std::size_t> expand(std::size_t max_iters) const;
};

struct ExperimentConfig {
    nlohmann::json instance;
    std::vector<SolverSpec> solvers;
    std::size_t max_iters = 1000;
    double gap_tolerance = 0.0;
    CheckpointSchedule checkpoints;
    std::size_t repetitions = 1;
    std::uint64_t base_seed = 0;
    bool want_reference = true;  // config value "auto" (default) vs "none"
    std::string output_dir;
    nlohmann::json raw;  // the exact document, hashed into the manifest
};

// Parse + validate; throws config_error on unknown generators/solvers,
// malformed schedules, or missing fields.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::string& path);

// Build the problem an instance spec describes: either {"generator": ...}
// with generator parameters, {"path": "problem.json"}, or {"dataset":
// "file.svm", "loss": ..., "regularizer": {...}}.
Problem instantiate(const nlohmann::json& instance_spec);

struct ExperimentResult {
    std::string manifest_path;
    std::vector<std::string> csv_paths;
};

// Runs every (solver, repetition) pair with seed = base_seed + repetition,
// writing one CSV per run plus manifest.json. All validation, instance
// construction, and reference certification happen before the output
// directory is created.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct VerifyConfig {
    nlohmann::json instance;
    std::size_t q = 1, m = 1;
    LambdaPolicy lambda_policy = LambdaPolicy::exact;
    std::size_t seeds = 50;
    std::uint64_t base_seed = 0;
    std::vector<std::size_t> checkpoints;  // strictly increasing
    double slack = 1.5;                    // envelope multiplier
    double theta_scale = 1.0;              // corruption knob; != 1 is rejected up front
    nlohmann::json raw;
};

VerifyConfig parse_verify_config(const nlohmann::json& doc);
VerifyConfig load_verify_config(const std::string& path);

// Empirical envelope check of both convergence guarantees: mean weighted
// distance potential against rho_distance^t Omega_0, and mean primal-dual
// gap against rho_gap^t times its theoretical constant, each within the
// configured slack. Returns a structured report with per-checkpoint ratios.
nlohmann::json verify_theorems(const VerifyConfig& cfg);

// CSV trace serialization: header iteration,elapsed_s,primal,dual,gap,dist_sq
// with %.17g numeric fields, empty when unavailable.
std::string trace_to_csv(const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> parse_trace_csv(const std::string& text);

}  // namespace dspdc
