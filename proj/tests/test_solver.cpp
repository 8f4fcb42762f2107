#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "dspdc/errors.hpp"
#include "dspdc/instances.hpp"
#include "dspdc/metrics.hpp"
#include "dspdc/scale.hpp"
#include "dspdc/solver.hpp"

using namespace dspdc;

namespace {

Problem tiny_problem() {
    return make_scalar_problem(
        DataMatrix::dense(2, 2, {1.0, 2.0, -1.0, 1.0}),
        {SmoothLoss::square(1.0), SmoothLoss::square(-1.0)}, Regularizer::l2(0.1));
}

SolverParams params_for(const Problem& prob, std::size_t q, std::size_t m,
                        ThetaMode mode = ThetaMode::distance) {
    const double lam = scale_constant_exact(prob.a, prob.dual_part, prob.primal_part, q, m);
    return compute_params(prob.n_blocks(), prob.p_blocks(), q, m, prob.lambda(), prob.gamma(),
                          lam, mode);
}

// For (q, m) whose subset-pair count exceeds the exact enumeration cap.
SolverParams heur_params_for(const Problem& prob, std::size_t q, std::size_t m,
                             ThetaMode mode = ThetaMode::distance) {
    const double lam = scale_constant_heuristic(prob.a, prob.dual_part, prob.primal_part, q, m);
    return compute_params(prob.n_blocks(), prob.p_blocks(), q, m, prob.lambda(), prob.gamma(),
                          lam, mode);
}

}  // namespace

TEST_CASE("full-batch steps reproduce the hand-derived trajectory") {
    const Problem prob = tiny_problem();
    const SolverParams sp = compute_params(2, 2, 2, 2, 0.1, 0.5, 5.3027756377319948);
    IterateState st = make_state(prob, IterateState::Maintained::at_ybar);
    const std::vector<std::size_t> all{0, 1};

    dspdc_step(prob, sp, st, all, all);
    CHECK(st.x[0] == doctest::Approx(0.082563058072853579).epsilon(1e-11));
    CHECK(st.x[1] == doctest::Approx(0.04128152903642679).epsilon(1e-11));
    CHECK(st.y[0] == doctest::Approx(-0.12850140705288296).epsilon(1e-11));
    CHECK(st.y[1] == doctest::Approx(0.12850140705288296).epsilon(1e-11));

    dspdc_step(prob, sp, st, all, all);
    CHECK(st.x[0] == doctest::Approx(0.22106689312374328).epsilon(1e-11));
    CHECK(st.x[1] == doctest::Approx(0.096121915796191407).epsilon(1e-11));
    CHECK(st.y[0] == doctest::Approx(-0.20887068168057701).epsilon(1e-11));
    CHECK(st.y[1] == doctest::Approx(0.23877755164400469).epsilon(1e-11));
}

TEST_CASE("runs are deterministic given the seed") {
    const Problem prob = gen_synthetic(25, 10, 1e-3, 1e-2, 3);
    const SolverParams sp = heur_params_for(prob, 3, 7);
    RunOptions opts;
    opts.seed = 11;
    opts.max_iters = 200;
    opts.checkpoints = {50, 200};
    const RunResult a = dspdc_run(prob, sp, opts);
    const RunResult b = dspdc_run(prob, sp, opts);
    CHECK(a.state.x == b.state.x);
    CHECK(a.state.y == b.state.y);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k)
        CHECK(a.trace[k].primal == b.trace[k].primal);

    RunOptions other = opts;
    other.seed = 12;
    CHECK(dspdc_run(prob, sp, other).state.x != a.state.x);
}

TEST_CASE("spdc is exactly dspdc with every primal coordinate") {
    const Problem prob = gen_synthetic(25, 10, 1e-3, 1e-2, 3);
    RunOptions opts;
    opts.seed = 21;
    opts.max_iters = 300;
    opts.checkpoints = {300};
    const RunResult s = spdc_run(prob, 4, opts);
    const SolverParams sp = spdc_params(prob, 4);
    CHECK(sp.q == prob.p_blocks());
    const RunResult d = dspdc_run(prob, sp, opts);
    CHECK(s.state.x == d.state.x);  // bit-identical reduction
    CHECK(s.state.y == d.state.y);
}

TEST_CASE("block solver reduces exactly to the scalar solver") {
    const Problem prob = gen_synthetic(18, 9, 1e-3, 1e-2, 5);
    for (const auto [q, m] : {std::pair<std::size_t, std::size_t>{2, 5},
                              std::pair<std::size_t, std::size_t>{9, 1},
                              std::pair<std::size_t, std::size_t>{3, 18}}) {
        const SolverParams sp = heur_params_for(prob, q, m);
        RunOptions opts;
        opts.seed = 31;
        opts.max_iters = 250;
        opts.checkpoints = {250};
        const RunResult blk = bdspdc_run(prob, sp, opts);
        const RunResult scl = dspdc_run(prob, sp, opts);
        CHECK(blk.state.x == scl.state.x);
        CHECK(blk.state.y == scl.state.y);
    }
}

TEST_CASE("factorized runs follow the materialized trajectory") {
    const Problem base = gen_synthetic(30, 20, 1e-3, 1e-2, 7);
    const Problem fact = gen_factorized(base, 6, 19);
    REQUIRE(fact.a.storage() == DataMatrix::Storage::factorized);
    Problem dense = fact;
    dense.a = DataMatrix::dense(fact.a.materialize());

    const SolverParams sp = heur_params_for(dense, 4, 9);
    RunOptions opts;
    opts.seed = 41;
    opts.max_iters = 500;
    opts.checkpoints = {500};
    const RunResult rf = dspdc_factorized_run(fact, sp, opts);
    const RunResult rd = dspdc_run(dense, sp, opts);
    for (std::size_t j = 0; j < rd.state.x.size(); ++j)
        CHECK(std::abs(rf.state.x[j] - rd.state.x[j]) <= 1e-8);
    for (std::size_t i = 0; i < rd.state.y.size(); ++i)
        CHECK(std::abs(rf.state.y[i] - rd.state.y[i]) <= 1e-8);
    CHECK(rf.flops > 0);
    CHECK(rd.flops == 0);
}

TEST_CASE("factorized work scales linearly in the inner dimension") {
    const Problem base = gen_synthetic(40, 30, 1e-3, 1e-2, 11);
    RunOptions opts;
    opts.seed = 5;
    opts.max_iters = 400;
    opts.checkpoints = {400};
    const SolverParams sp5 = heur_params_for(gen_factorized(base, 5, 23), 3, 4);
    const std::uint64_t f5 =
        dspdc_factorized_run(gen_factorized(base, 5, 23), sp5, opts).flops;
    const SolverParams sp10 = heur_params_for(gen_factorized(base, 10, 23), 3, 4);
    const std::uint64_t f10 =
        dspdc_factorized_run(gen_factorized(base, 10, 23), sp10, opts).flops;
    CHECK(static_cast<double>(f10) / static_cast<double>(f5) == doctest::Approx(2.0));
}

TEST_CASE("extrapolation invariant holds after every iteration") {
    const Problem prob = gen_synthetic(20, 8, 1e-3, 1e-2, 9);
    const SolverParams sp = heur_params_for(prob, 2, 6);
    RunOptions opts;
    opts.seed = 51;
    opts.max_iters = 150;
    std::size_t calls = 0;
    opts.observer = [&](const IterateState& st) {
        ++calls;
        for (std::size_t j = 0; j < st.x.size(); ++j) {
            const double want = st.x_prev[j] + (sp.theta + 1.0) * (st.x[j] - st.x_prev[j]);
            CHECK(st.x_bar[j] == want);  // computed exactly this way
        }
    };
    dspdc_run(prob, sp, opts);
    CHECK(calls == 150);
}

TEST_CASE("maintained products stay consistent over long runs") {
    const Problem prob = gen_synthetic(30, 12, 1e-3, 1e-2, 13);
    for (const auto [q, m] : {std::pair<std::size_t, std::size_t>{3, 2},
                              std::pair<std::size_t, std::size_t>{2, 25}}) {
        const SolverParams sp = heur_params_for(prob, q, m);
        RunOptions opts;
        opts.seed = 61;
        opts.max_iters = 5000;
        opts.drift_check_every = 500;  // consistency_error on drift
        CHECK_NOTHROW(dspdc_run(prob, sp, opts));
    }
}

TEST_CASE("the exact saddle point is a fixed point") {
    const LowerBoundInstance lb = gen_lower_bound(6, 9.0);
    const SolverParams sp = params_for(lb.problem, 1, 1);
    RunOptions opts;
    opts.seed = 71;
    opts.max_iters = 50;
    opts.start = SaddlePoint{lb.x_star, lb.y_star};
    const RunResult res = dspdc_run(lb.problem, sp, opts);
    for (std::size_t j = 0; j < res.state.x.size(); ++j)
        CHECK(std::abs(res.state.x[j] - lb.x_star[j]) <= 1e-12);
    for (std::size_t i = 0; i < res.state.y.size(); ++i)
        CHECK(std::abs(res.state.y[i] - lb.y_star[i]) <= 1e-12);
}

TEST_CASE("distance to the optimum contracts on the adversarial instance") {
    const LowerBoundInstance lb = gen_lower_bound(4, 9.0);
    const ReferenceSolution ref = certify_reference(lb.problem, {.use_cache = false});
    CHECK(ref.source == "closed_form");
    const SolverParams sp = params_for(lb.problem, 1, 1);
    RunOptions opts;
    opts.seed = 81;
    opts.max_iters = 20000;
    opts.checkpoints = {20000};
    opts.reference = &ref;
    const RunResult res = dspdc_run(lb.problem, sp, opts);
    REQUIRE(res.trace.back().dist_sq.has_value());
    CHECK(*res.trace.back().dist_sq <= 1e-10);
}

TEST_CASE("gap tolerance stops the run early") {
    const Problem prob = gen_synthetic(20, 8, 1e-3, 1e-2, 15);
    const ReferenceSolution ref = certify_reference(prob, {.use_cache = false});
    const SolverParams sp = params_for(prob, 8, 20, ThetaMode::gap);
    RunOptions opts;
    opts.seed = 91;
    opts.max_iters = 200000;
    opts.checkpoints.resize(200);
    for (std::size_t k = 0; k < 200; ++k) opts.checkpoints[k] = (k + 1) * 1000;
    opts.gap_tolerance = 1e-8;
    opts.reference = &ref;
    const RunResult res = dspdc_run(prob, sp, opts);
    CHECK(res.stopped_early);
    CHECK(res.state.iteration < 200000);
    REQUIRE(res.trace.back().gap.has_value());
    CHECK(*res.trace.back().gap <= 1e-8);
}

TEST_CASE("lying about the scale constant trips the divergence warning") {
    const Problem prob = gen_synthetic(20, 8, 1e-3, 1e-2, 17);
    const double lam = scale_constant_exact(prob.a, prob.dual_part, prob.primal_part, 2, 2);
    const ReferenceSolution ref = certify_reference(prob, {.use_cache = false});
    const SolverParams sp =
        compute_params(20, 8, 2, 2, prob.lambda(), prob.gamma(), lam / 1e5, ThetaMode::distance);
    RunOptions opts;
    opts.seed = 101;
    opts.max_iters = 500;
    opts.checkpoints = {10, 50, 100, 500};
    opts.reference = &ref;
    opts.drift_check_every = 0;
    const RunResult res = dspdc_run(prob, sp, opts);
    CHECK(res.divergence_warning);
}

TEST_CASE("trace records checkpoints with the available metrics") {
    const Problem prob = gen_synthetic(15, 6, 1e-3, 1e-2, 19);
    const SolverParams sp = params_for(prob, 2, 5);
    RunOptions opts;
    opts.seed = 111;
    opts.max_iters = 100;
    opts.checkpoints = {10, 100};
    const RunResult res = dspdc_run(prob, sp, opts);
    REQUIRE(res.trace.size() == 3);  // iteration 0 plus two checkpoints
    CHECK(res.trace[0].iteration == 0);
    CHECK(res.trace[1].iteration == 10);
    CHECK(res.trace[2].iteration == 100);
    for (const TraceRecord& r : res.trace) {
        CHECK(r.dual.has_value());
        CHECK(r.gap.has_value());
        CHECK_FALSE(r.dist_sq.has_value());  // no reference supplied
    }
    RunOptions bad = opts;
    bad.checkpoints = {10, 10};
    CHECK_THROWS_AS(dspdc_run(prob, sp, bad), std::invalid_argument);
}

TEST_CASE("auto dispatch picks the specialized runner") {
    RunOptions opts;
    opts.seed = 121;
    opts.max_iters = 50;

    const Problem fact = gen_factorized(gen_synthetic(15, 10, 1e-3, 1e-2, 2), 4, 3);
    CHECK(run_dspdc_auto(fact, params_for(fact, 2, 3), opts).flops > 0);

    const Problem mr = gen_matrix_risk(8, 3, 3, 1.0, 23);
    const RunResult rb = run_dspdc_auto(mr, params_for(mr, 1, 2), opts);
    CHECK(rb.eig_decompositions == 50);  // q = 1 block per iteration

    const Problem plain = gen_synthetic(15, 10, 1e-3, 1e-2, 2);
    const RunResult rp = run_dspdc_auto(plain, params_for(plain, 2, 3), opts);
    CHECK(rp.flops == 0);
    CHECK(rp.eig_decompositions == 0);
}

TEST_CASE("psd runs decrease the primal objective") {
    const Problem mr = gen_matrix_risk(12, 3, 4, 1.0, 29);
    const SolverParams sp = params_for(mr, 1, 1);
    RunOptions opts;
    opts.seed = 131;
    opts.max_iters = 400;
    opts.checkpoints = {400};
    const RunResult res = bdspdc_run(mr, sp, opts);
    CHECK(res.eig_decompositions == 400);
    CHECK(res.trace.back().primal < res.trace.front().primal);
    CHECK_FALSE(res.trace.back().dual.has_value());  // no conjugate for the cone
}

TEST_CASE("sdca converges and maintains the primal map") {
    const Problem prob = gen_synthetic(25, 10, 1e-3, 1e-2, 31);
    const ReferenceSolution ref = certify_reference(prob, {.use_cache = false});
    RunOptions opts;
    opts.seed = 141;
    opts.max_iters = 60000;
    opts.checkpoints.resize(60);
    for (std::size_t k = 0; k < 60; ++k) opts.checkpoints[k] = (k + 1) * 1000;
    opts.gap_tolerance = 1e-7;
    opts.reference = &ref;
    std::size_t checked = 0;
    opts.observer = [&](const IterateState& st) {
        if (++checked % 500 != 0) return;  // keep the invariant check cheap
        std::vector<double> w(prob.p_cols(), 0.0);
        prob.a.apply_transpose(st.y, w);
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double want =
                prob.reg.grad_conjugate_scalar(-w[j] / static_cast<double>(prob.n_rows()));
            CHECK(st.x[j] == doctest::Approx(want).epsilon(1e-9));
        }
    };
    const RunResult res = sdca_run(prob, opts);
    CHECK(res.stopped_early);
    CHECK(*res.trace.back().gap <= 1e-7);

    const RunResult again = sdca_run(prob, opts);
    CHECK(again.state.x == res.state.x);  // deterministic

    const Problem mr = gen_matrix_risk(6, 2, 2, 1.0, 3);
    CHECK_THROWS_AS(sdca_run(mr, opts), unsupported_operation);
}

TEST_CASE("sdca on the elastic net produces sparse iterates") {
    const Problem prob = gen_synthetic(30, 40, 0.05, 1e-2, 33);
    RunOptions opts;
    opts.seed = 151;
    opts.max_iters = 3000;
    const RunResult res = sdca_run(prob, opts);
    std::size_t zeros = 0;
    for (double v : res.state.x) zeros += v == 0.0;
    CHECK(zeros > 0);  // soft threshold pins small coordinates exactly
}
