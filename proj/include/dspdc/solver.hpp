#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dspdc/metrics.hpp"
#include "dspdc/params.hpp"
#include "dspdc/problem.hpp"

namespace dspdc {

// One trace row, recorded at each checkpoint iteration.
struct TraceRecord {
    std::size_t iteration = 0;
    double elapsed_s = 0.0;
    double primal = 0.0;
    std::optional<double> dual;     // empty when the dual objective is unavailable
    std::optional<double> gap;      // empty when the dual objective is unavailable
    std::optional<double> dist_sq;  // empty without a reference solution
};

// Solver iterate bundle. The bar vectors carry the extrapolated iterates;
// x_bar == x_prev + (theta + 1) (x - x_prev) holds after every step.
struct IterateState {
    enum class Maintained { at_ybar, a_xbar, factorized };

    std::vector<double> x, y;
    std::vector<double> x_prev;
    std::vector<double> x_bar, y_bar;
    Maintained maintained = Maintained::at_ybar;
    // maintained == at_ybar: A^T y and A^T y_bar (p entries each)
    std::vector<double> aty, aty_bar;
    // maintained == a_xbar: A x and A x_bar (n entries each)
    std::vector<double> ax, ax_bar;
    // maintained == factorized: U^T y, U^T y_bar, V x, V x_bar (d entries each)
    std::vector<double> uty, uty_bar, vx, vx_bar;
    std::size_t iteration = 0;
};

struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t max_iters = 1000;
    // Strictly increasing checkpoint iterations; iteration 0 is always recorded.
    std::vector<std::size_t> checkpoints;
    double gap_tolerance = 0.0;  // > 0: stop at the first checkpoint with gap <= tol
    const ReferenceSolution* reference = nullptr;
    std::size_t drift_check_every = 1000;  // 0 disables the maintained-product check
    // Test hook, called after every iteration.
    std::function<void(const IterateState&)> observer;
    // Optional warm start (defaults to the origin).
    std::optional<SaddlePoint> start;
};

struct RunResult {
    IterateState state;
    std::vector<TraceRecord> trace;
    std::uint64_t eig_decompositions = 0;
    // d-proportional work counter for factorized runs (increments of d per
    // length-d primitive); 0 for materialized runs.
    std::uint64_t flops = 0;
    bool divergence_warning = false;
    bool stopped_early = false;
};

// --- scalar DSPDC (all-ones partitions, separable regularizer) -------------

// Initialize an iterate state for the given problem/maintained side.
IterateState make_state(const Problem& prob, IterateState::Maintained side,
                        const std::optional<SaddlePoint>& start = std::nullopt);

// One iteration with explicit index sets (sorted, distinct, in range); used
// by the driver and directly by tests.
void dspdc_step(const Problem& prob, const SolverParams& sp, IterateState& state,
                std::span<const std::size_t> is, std::span<const std::size_t> js);

// Full driver: samples I before J each iteration from one generator seeded by
// options.seed, maintains A^T y_bar when n/m >= p/q and A x_bar otherwise,
// records trace rows at checkpoints, rechecks the maintained products every
// drift_check_every iterations, and stops early once gap <= gap_tolerance at
// a checkpoint.
RunResult dspdc_run(const Problem& prob, const SolverParams& sp, const RunOptions& opts);

// Factorized variant: requires factorized storage; per-iteration cost
// O(d (m + q)) with the flop counter exposed in the result.
RunResult dspdc_factorized_run(const Problem& prob, const SolverParams& sp, const RunOptions& opts);

// --- block DSPDC ------------------------------------------------------------

void bdspdc_step(const Problem& prob, const SolverParams& sp, IterateState& state,
                 std::span<const std::size_t> is, std::span<const std::size_t> js,
                 std::uint64_t* eig_counter = nullptr);

// Block driver; index sets range over blocks. Reduces to dspdc_run for
// all-ones partitions.
RunResult bdspdc_run(const Problem& prob, const SolverParams& sp, const RunOptions& opts);

// --- baselines ---------------------------------------------------------------

enum class LambdaPolicy { exact, heuristic };

// SPDC baseline: DSPDC with q = p (all primal coordinates every iteration).
// Parameters computed internally from Lambda_{p,m} under the given policy.
RunResult spdc_run(const Problem& prob, std::size_t m, const RunOptions& opts,
                   ThetaMode mode = ThetaMode::distance,
                   LambdaPolicy policy = LambdaPolicy::heuristic);
// The parameters spdc_run would use (for reduction tests).
SolverParams spdc_params(const Problem& prob, std::size_t m,
                         ThetaMode mode = ThetaMode::distance,
                         LambdaPolicy policy = LambdaPolicy::heuristic);

// SDCA baseline: one uniformly sampled dual coordinate per iteration,
// maximized exactly over the dual objective, with x = grad g*(-A^T y / n)
// maintained. Requires a regularizer with a conjugate.
RunResult sdca_run(const Problem& prob, const RunOptions& opts);

// Dispatch on problem structure: block problems (non-trivial partitions or a
// PSD regularizer) go through bdspdc_run, factorized storage through
// dspdc_factorized_run, the rest through dspdc_run.
RunResult run_dspdc_auto(const Problem& prob, const SolverParams& sp, const RunOptions& opts);

}  // namespace dspdc
