#include "dspdc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dspdc/errors.hpp"
#include "dspdc/sampling.hpp"
#include "dspdc/scale.hpp"
#include "dspdc/vec.hpp"

namespace dspdc {

namespace {

void check_dims(const Problem& prob, const SolverParams& sp) {
    prob.validate();
    sp.validate();
    if (sp.n != prob.n_blocks() || sp.p != prob.p_blocks())
        throw std::invalid_argument("solver: params built for " + std::to_string(sp.n) + "x" +
                                    std::to_string(sp.p) + " blocks, problem has " +
                                    std::to_string(prob.n_blocks()) + "x" +
                                    std::to_string(prob.p_blocks()));
}

void check_checkpoints(const RunOptions& opts) {
    const auto& cp = opts.checkpoints;
    for (std::size_t k = 0; k < cp.size(); ++k) {
        if (cp[k] == 0 || (k > 0 && cp[k] <= cp[k - 1]))
            throw std::invalid_argument("RunOptions: checkpoints must be strictly increasing and positive");
    }
}

void require_scalar(const Problem& prob, const char* who) {
    if (!prob.dual_part.is_all_ones() || !prob.primal_part.is_all_ones() ||
        prob.reg.kind == Regularizer::Kind::psd_frobenius)
        throw std::invalid_argument(std::string(who) +
                                    ": block problems go through bdspdc_run (non-scalar partition "
                                    "or matrix-valued regularizer)");
}

void relative_compare(std::span<const double> fresh, std::span<const double> kept,
                      const char* what) {
    double scale = 1.0, diff = 0.0;
    for (std::size_t k = 0; k < fresh.size(); ++k) {
        scale = std::max(scale, std::abs(fresh[k]));
        diff = std::max(diff, std::abs(fresh[k] - kept[k]));
    }
    if (diff > 1e-8 * scale)
        throw consistency_error(std::string("maintained product drift: ") + what +
                                " deviates from recomputation by " + std::to_string(diff));
}

// Shared driver: sampling, checkpoints, drift checks, early stop, divergence.
template <typename Step, typename Drift>
RunResult drive(const Problem& prob, const SolverParams& sp, const RunOptions& opts,
                IterateState state, Step step, Drift drift) {
    check_checkpoints(opts);
    RunResult res;
    res.state = std::move(state);
    IterateState& st = res.state;

    Rng rng(opts.seed);
    SubsetSampler sample_i(sp.n), sample_j(sp.p);
    std::vector<std::size_t> is, js;

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    auto record = [&](std::size_t iter) {
        TraceRecord r;
        r.iteration = iter;
        r.elapsed_s = elapsed();
        r.primal = primal_objective(prob, st.x);
        r.dual = dual_objective(prob, st.y);
        if (r.dual) r.gap = r.primal - *r.dual;
        if (opts.reference) r.dist_sq = distance_sq(st.x, st.y, opts.reference->point);
        res.trace.push_back(r);
        return r;
    };

    record(0);
    double omega0 = 0.0;
    if (opts.reference)
        omega0 = omega_potential(sp, st.x, st.y, opts.reference->point, /*initial=*/true);

    std::size_t next_cp = 0;
    while (next_cp < opts.checkpoints.size() && opts.checkpoints[next_cp] == 0) ++next_cp;

    for (std::size_t t = 1; t <= opts.max_iters; ++t) {
        sample_i.draw(rng, sp.m, is);
        sample_j.draw(rng, sp.q, js);
        step(st, is, js);
        st.iteration = t;
        if (opts.observer) opts.observer(st);
        if (opts.drift_check_every != 0 && t % opts.drift_check_every == 0) drift(st);
        if (next_cp < opts.checkpoints.size() && opts.checkpoints[next_cp] == t) {
            ++next_cp;
            const TraceRecord r = record(t);
            if (opts.reference &&
                omega_potential(sp, st.x, st.y, opts.reference->point, false) > 10.0 * omega0)
                res.divergence_warning = true;
            if (opts.gap_tolerance > 0.0 && r.gap && *r.gap <= opts.gap_tolerance) {
                res.stopped_early = true;
                break;
            }
        }
    }
    return res;
}

IterateState::Maintained pick_side(const SolverParams& sp) {
    // maintain A^T y_bar when n/m >= p/q (ties included), else A x_bar
    const double nm = static_cast<double>(sp.n) / static_cast<double>(sp.m);
    const double pq = static_cast<double>(sp.p) / static_cast<double>(sp.q);
    return nm >= pq ? IterateState::Maintained::at_ybar : IterateState::Maintained::a_xbar;
}

}  // namespace

IterateState make_state(const Problem& prob, IterateState::Maintained side,
                        const std::optional<SaddlePoint>& start) {
    const std::size_t n = prob.a.rows(), p = prob.a.cols();
    IterateState st;
    st.maintained = side;
    if (start) {
        if (start->x.size() != p || start->y.size() != n)
            throw std::invalid_argument("make_state: start point has wrong dimensions");
        st.x = start->x;
        st.y = start->y;
    } else {
        st.x.assign(p, 0.0);
        st.y.assign(n, 0.0);
    }
    st.x_prev = st.x;
    st.x_bar = st.x;
    st.y_bar = st.y;
    switch (side) {
        case IterateState::Maintained::at_ybar:
            st.aty.assign(p, 0.0);
            prob.a.apply_transpose(st.y, st.aty);
            st.aty_bar = st.aty;
            break;
        case IterateState::Maintained::a_xbar:
            st.ax.assign(n, 0.0);
            prob.a.apply(st.x, st.ax);
            st.ax_bar = st.ax;
            break;
        case IterateState::Maintained::factorized: {
            const std::size_t d = prob.a.inner_dim();
            st.uty.assign(d, 0.0);
            st.vx.assign(d, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                if (st.y[i] != 0.0) axpy(st.y[i], prob.a.u_row(i), st.uty);
            for (std::size_t j = 0; j < p; ++j)
                if (st.x[j] != 0.0) axpy(st.x[j], prob.a.v_col(j), st.vx);
            st.uty_bar = st.uty;
            st.vx_bar = st.vx;
            break;
        }
    }
    return st;
}

namespace {

struct StepScratch {
    std::vector<double> dy, dx, buf_p, buf_n, buf_d_s, buf_d_r;
    std::vector<std::size_t> last_is, last_js;
};

// One scalar DSPDC iteration. Order per the method: dual prox on I against
// x_bar, dual extrapolation, primal prox on J against the fresh y_bar
// (centered at the un-extrapolated x_j), primal extrapolation.
void scalar_step(const Problem& prob, const SolverParams& sp, IterateState& st,
                 std::span<const std::size_t> is, std::span<const std::size_t> js,
                 StepScratch& ws) {
    const double nm = static_cast<double>(sp.n) / static_cast<double>(sp.m);
    const double th1 = sp.theta + 1.0;
    const std::size_t nb = sp.n;

    ws.dy.resize(is.size());
    ws.dx.resize(js.size());

    if (st.maintained == IterateState::Maintained::at_ybar) {
        for (std::size_t k = 0; k < is.size(); ++k) {
            const std::size_t i = is[k];
            const double u = prob.a.row_dot(i, st.x_bar);
            ws.dy[k] = dual_prox(prob.losses[i], u, st.y[i], sp.sigma, nb) - st.y[i];
        }
        for (std::size_t i : ws.last_is) st.y_bar[i] = st.y[i];
        for (std::size_t k = 0; k < is.size(); ++k) st.y_bar[is[k]] = st.y[is[k]] + nm * ws.dy[k];
        for (std::size_t k = 0; k < is.size(); ++k) st.y[is[k]] += ws.dy[k];

        ws.buf_p.assign(prob.a.cols(), 0.0);
        for (std::size_t k = 0; k < is.size(); ++k)
            prob.a.add_row_scaled(is[k], ws.dy[k], ws.buf_p);
        for (std::size_t j = 0; j < prob.a.cols(); ++j) {
            st.aty_bar[j] = st.aty[j] + nm * ws.buf_p[j];
            st.aty[j] += ws.buf_p[j];
        }

        for (std::size_t k = 0; k < js.size(); ++k) {
            const std::size_t j = js[k];
            ws.dx[k] = primal_prox(prob.reg, st.aty_bar[j], st.x[j], sp.tau, nb) - st.x[j];
        }
    } else {
        for (std::size_t k = 0; k < is.size(); ++k) {
            const std::size_t i = is[k];
            ws.dy[k] = dual_prox(prob.losses[i], st.ax_bar[i], st.y[i], sp.sigma, nb) - st.y[i];
        }
        for (std::size_t i : ws.last_is) st.y_bar[i] = st.y[i];
        for (std::size_t k = 0; k < is.size(); ++k) st.y_bar[is[k]] = st.y[is[k]] + nm * ws.dy[k];
        for (std::size_t k = 0; k < is.size(); ++k) st.y[is[k]] += ws.dy[k];

        for (std::size_t k = 0; k < js.size(); ++k) {
            const std::size_t j = js[k];
            const double v = prob.a.col_dot(j, st.y_bar);
            ws.dx[k] = primal_prox(prob.reg, v, st.x[j], sp.tau, nb) - st.x[j];
        }
        ws.buf_n.assign(prob.a.rows(), 0.0);
        for (std::size_t k = 0; k < js.size(); ++k)
            prob.a.add_col_scaled(js[k], ws.dx[k], ws.buf_n);
        for (std::size_t i = 0; i < prob.a.rows(); ++i) {
            st.ax_bar[i] = st.ax[i] + th1 * ws.buf_n[i];
            st.ax[i] += ws.buf_n[i];
        }
    }

    for (std::size_t j : ws.last_js) {
        st.x_bar[j] = st.x[j];
        st.x_prev[j] = st.x[j];
    }
    for (std::size_t k = 0; k < js.size(); ++k) {
        const std::size_t j = js[k];
        st.x_bar[j] = st.x[j] + th1 * ws.dx[k];
        st.x_prev[j] = st.x[j];
        st.x[j] += ws.dx[k];
    }
    ws.last_is.assign(is.begin(), is.end());
    ws.last_js.assign(js.begin(), js.end());
}

void scalar_drift_check(const Problem& prob, IterateState& st, StepScratch& ws) {
    if (st.maintained == IterateState::Maintained::at_ybar) {
        ws.buf_p.assign(prob.a.cols(), 0.0);
        prob.a.apply_transpose(st.y, ws.buf_p);
        relative_compare(ws.buf_p, st.aty, "A^T y");
        prob.a.apply_transpose(st.y_bar, ws.buf_p);
        relative_compare(ws.buf_p, st.aty_bar, "A^T y_bar");
    } else {
        ws.buf_n.assign(prob.a.rows(), 0.0);
        prob.a.apply(st.x, ws.buf_n);
        relative_compare(ws.buf_n, st.ax, "A x");
        prob.a.apply(st.x_bar, ws.buf_n);
        relative_compare(ws.buf_n, st.ax_bar, "A x_bar");
    }
}

}  // namespace

void dspdc_step(const Problem& prob, const SolverParams& sp, IterateState& state,
                std::span<const std::size_t> is, std::span<const std::size_t> js) {
    require_scalar(prob, "dspdc_step");
    // Reconstruct the undo lists from where the extrapolated vectors differ;
    // the run loop keeps them incrementally instead.
    StepScratch ws;
    for (std::size_t i = 0; i < state.y.size(); ++i)
        if (state.y_bar[i] != state.y[i]) ws.last_is.push_back(i);
    for (std::size_t j = 0; j < state.x.size(); ++j)
        if (state.x_bar[j] != state.x[j] || state.x_prev[j] != state.x[j]) ws.last_js.push_back(j);
    scalar_step(prob, sp, state, is, js, ws);
}

RunResult dspdc_run(const Problem& prob, const SolverParams& sp, const RunOptions& opts) {
    check_dims(prob, sp);
    require_scalar(prob, "dspdc_run");
    auto ws = std::make_shared<StepScratch>();
    return drive(
        prob, sp, opts, make_state(prob, pick_side(sp), opts.start),
        [&prob, &sp, ws](IterateState& st, std::span<const std::size_t> is,
                         std::span<const std::size_t> js) { scalar_step(prob, sp, st, is, js, *ws); },
        [&prob, ws](IterateState& st) { scalar_drift_check(prob, st, *ws); });
}

// --- factorized --------------------------------------------------------------

namespace {

void factorized_step(const Problem& prob, const SolverParams& sp, IterateState& st,
                     std::span<const std::size_t> is, std::span<const std::size_t> js,
                     StepScratch& ws, std::uint64_t& flops) {
    const double nm = static_cast<double>(sp.n) / static_cast<double>(sp.m);
    const double th1 = sp.theta + 1.0;
    const std::size_t nb = sp.n;
    const std::size_t d = prob.a.inner_dim();

    ws.dy.resize(is.size());
    ws.dx.resize(js.size());

    // dual prox against v_bar = V x_bar
    for (std::size_t k = 0; k < is.size(); ++k) {
        const std::size_t i = is[k];
        const double u = dot(prob.a.u_row(i), st.vx_bar);
        flops += d;
        ws.dy[k] = dual_prox(prob.losses[i], u, st.y[i], sp.sigma, nb) - st.y[i];
    }
    // u^{t+1} = u^t + U^T dy;  u_bar^{t+1} = u^t + (n/m) U^T dy
    ws.buf_d_s.assign(d, 0.0);
    for (std::size_t k = 0; k < is.size(); ++k) {
        axpy(ws.dy[k], prob.a.u_row(is[k]), ws.buf_d_s);
        flops += d;
    }
    for (std::size_t c = 0; c < d; ++c) {
        st.uty_bar[c] = st.uty[c] + nm * ws.buf_d_s[c];
        st.uty[c] += ws.buf_d_s[c];
    }
    flops += 2 * d;

    for (std::size_t i : ws.last_is) st.y_bar[i] = st.y[i];
    for (std::size_t k = 0; k < is.size(); ++k) st.y_bar[is[k]] = st.y[is[k]] + nm * ws.dy[k];
    for (std::size_t k = 0; k < is.size(); ++k) st.y[is[k]] += ws.dy[k];

    // primal prox against u_bar^{t+1} = U^T y_bar^{t+1}
    for (std::size_t k = 0; k < js.size(); ++k) {
        const std::size_t j = js[k];
        const double v = dot(prob.a.v_col(j), st.uty_bar);
        flops += d;
        ws.dx[k] = primal_prox(prob.reg, v, st.x[j], sp.tau, nb) - st.x[j];
    }
    // v^{t+1} = v^t + V dx;  v_bar^{t+1} = v^t + (theta+1) V dx
    ws.buf_d_r.assign(d, 0.0);
    for (std::size_t k = 0; k < js.size(); ++k) {
        axpy(ws.dx[k], prob.a.v_col(js[k]), ws.buf_d_r);
        flops += d;
    }
    for (std::size_t c = 0; c < d; ++c) {
        st.vx_bar[c] = st.vx[c] + th1 * ws.buf_d_r[c];
        st.vx[c] += ws.buf_d_r[c];
    }
    flops += 2 * d;

    for (std::size_t j : ws.last_js) {
        st.x_bar[j] = st.x[j];
        st.x_prev[j] = st.x[j];
    }
    for (std::size_t k = 0; k < js.size(); ++k) {
        const std::size_t j = js[k];
        st.x_bar[j] = st.x[j] + th1 * ws.dx[k];
        st.x_prev[j] = st.x[j];
        st.x[j] += ws.dx[k];
    }
    ws.last_is.assign(is.begin(), is.end());
    ws.last_js.assign(js.begin(), js.end());
}

void factorized_drift_check(const Problem& prob, IterateState& st, StepScratch& ws) {
    const std::size_t d = prob.a.inner_dim();
    auto recompute = [&](std::span<const double> vec, bool left) {
        ws.buf_d_s.assign(d, 0.0);
        if (left) {
            for (std::size_t i = 0; i < prob.a.rows(); ++i)
                if (vec[i] != 0.0) axpy(vec[i], prob.a.u_row(i), ws.buf_d_s);
        } else {
            for (std::size_t j = 0; j < prob.a.cols(); ++j)
                if (vec[j] != 0.0) axpy(vec[j], prob.a.v_col(j), ws.buf_d_s);
        }
    };
    recompute(st.y, true);
    relative_compare(ws.buf_d_s, st.uty, "U^T y");
    recompute(st.y_bar, true);
    relative_compare(ws.buf_d_s, st.uty_bar, "U^T y_bar");
    recompute(st.x, false);
    relative_compare(ws.buf_d_s, st.vx, "V x");
    recompute(st.x_bar, false);
    relative_compare(ws.buf_d_s, st.vx_bar, "V x_bar");
}

}  // namespace

RunResult dspdc_factorized_run(const Problem& prob, const SolverParams& sp, const RunOptions& opts) {
    check_dims(prob, sp);
    require_scalar(prob, "dspdc_factorized_run");
    if (prob.a.storage() != DataMatrix::Storage::factorized)
        throw std::invalid_argument("dspdc_factorized_run: matrix is not factorized");
    auto ws = std::make_shared<StepScratch>();
    auto flops = std::make_shared<std::uint64_t>(0);
    RunResult res = drive(
        prob, sp, opts, make_state(prob, IterateState::Maintained::factorized, opts.start),
        [&prob, &sp, ws, flops](IterateState& st, std::span<const std::size_t> is,
                                std::span<const std::size_t> js) {
            factorized_step(prob, sp, st, is, js, *ws, *flops);
        },
        [&prob, ws](IterateState& st) { factorized_drift_check(prob, st, *ws); });
    res.flops = *flops;
    return res;
}

// --- block solver -------------------------------------------------------------

namespace {

struct BlockScratch {
    StepScratch base;
    std::vector<double> vblock, xblock;
};

void block_step(const Problem& prob, const SolverParams& sp, IterateState& st,
                std::span<const std::size_t> is, std::span<const std::size_t> js, BlockScratch& ws,
                std::uint64_t* eig_counter) {
    const double nm = static_cast<double>(sp.n) / static_cast<double>(sp.m);
    const double th1 = sp.theta + 1.0;
    const std::size_t nb = sp.n;
    const BlockPartition& dp = prob.dual_part;
    const BlockPartition& pp = prob.primal_part;
    const bool psd = prob.reg.kind == Regularizer::Kind::psd_frobenius;

    // scalar rows touched this iteration
    auto& rows = ws.base.dy;  // per-row dual deltas, aligned with row_list
    std::vector<std::size_t> row_list;
    for (std::size_t bi : is)
        for (std::size_t r = 0; r < dp.size(bi); ++r) row_list.push_back(dp.offset(bi) + r);
    rows.resize(row_list.size());

    // (1) dual prox per selected block, coordinate-wise within the block
    for (std::size_t k = 0; k < row_list.size(); ++k) {
        const std::size_t r = row_list[k];
        const double u = st.maintained == IterateState::Maintained::at_ybar
                             ? prob.a.row_dot(r, st.x_bar)
                             : st.ax_bar[r];
        rows[k] = dual_prox(prob.losses[r], u, st.y[r], sp.sigma, nb) - st.y[r];
    }
    // (2) dual extrapolation
    for (std::size_t r : ws.base.last_is) st.y_bar[r] = st.y[r];
    for (std::size_t k = 0; k < row_list.size(); ++k)
        st.y_bar[row_list[k]] = st.y[row_list[k]] + nm * rows[k];
    for (std::size_t k = 0; k < row_list.size(); ++k) st.y[row_list[k]] += rows[k];

    if (st.maintained == IterateState::Maintained::at_ybar) {
        ws.base.buf_p.assign(prob.a.cols(), 0.0);
        for (std::size_t k = 0; k < row_list.size(); ++k)
            prob.a.add_row_scaled(row_list[k], rows[k], ws.base.buf_p);
        for (std::size_t j = 0; j < prob.a.cols(); ++j) {
            st.aty_bar[j] = st.aty[j] + nm * ws.base.buf_p[j];
            st.aty[j] += ws.base.buf_p[j];
        }
    }

    // (3) primal prox per selected block
    std::vector<std::size_t> col_list;
    auto& dxs = ws.base.dx;  // per-column primal deltas, aligned with col_list
    dxs.clear();
    for (std::size_t bj : js) {
        const std::size_t c0 = pp.offset(bj), qj = pp.size(bj);
        ws.vblock.resize(qj);
        for (std::size_t c = 0; c < qj; ++c)
            ws.vblock[c] = st.maintained == IterateState::Maintained::at_ybar
                               ? st.aty_bar[c0 + c]
                               : prob.a.col_dot(c0 + c, st.y_bar);
        if (psd) {
            const std::size_t d = prob.reg.dim;
            ws.xblock.resize(qj);
            psd_prox({ws.vblock.data(), qj}, {st.x.data() + c0, qj}, sp.tau, prob.reg.lambda, nb, d,
                     {ws.xblock.data(), qj}, eig_counter);
            for (std::size_t c = 0; c < qj; ++c) {
                col_list.push_back(c0 + c);
                dxs.push_back(ws.xblock[c] - st.x[c0 + c]);
            }
        } else {
            for (std::size_t c = 0; c < qj; ++c) {
                col_list.push_back(c0 + c);
                dxs.push_back(primal_prox(prob.reg, ws.vblock[c], st.x[c0 + c], sp.tau, nb) -
                              st.x[c0 + c]);
            }
        }
    }

    if (st.maintained == IterateState::Maintained::a_xbar) {
        ws.base.buf_n.assign(prob.a.rows(), 0.0);
        for (std::size_t k = 0; k < col_list.size(); ++k)
            prob.a.add_col_scaled(col_list[k], dxs[k], ws.base.buf_n);
        for (std::size_t i = 0; i < prob.a.rows(); ++i) {
            st.ax_bar[i] = st.ax[i] + th1 * ws.base.buf_n[i];
            st.ax[i] += ws.base.buf_n[i];
        }
    }

    // (4) primal extrapolation
    for (std::size_t j : ws.base.last_js) {
        st.x_bar[j] = st.x[j];
        st.x_prev[j] = st.x[j];
    }
    for (std::size_t k = 0; k < col_list.size(); ++k) {
        const std::size_t j = col_list[k];
        st.x_bar[j] = st.x[j] + th1 * dxs[k];
        st.x_prev[j] = st.x[j];
        st.x[j] += dxs[k];
    }
    ws.base.last_is = std::move(row_list);
    ws.base.last_js = std::move(col_list);
}

}  // namespace

void bdspdc_step(const Problem& prob, const SolverParams& sp, IterateState& state,
                 std::span<const std::size_t> is, std::span<const std::size_t> js,
                 std::uint64_t* eig_counter) {
    BlockScratch ws;
    for (std::size_t i = 0; i < state.y.size(); ++i)
        if (state.y_bar[i] != state.y[i]) ws.base.last_is.push_back(i);
    for (std::size_t j = 0; j < state.x.size(); ++j)
        if (state.x_bar[j] != state.x[j] || state.x_prev[j] != state.x[j])
            ws.base.last_js.push_back(j);
    block_step(prob, sp, state, is, js, ws, eig_counter);
}

RunResult bdspdc_run(const Problem& prob, const SolverParams& sp, const RunOptions& opts) {
    check_dims(prob, sp);
    auto ws = std::make_shared<BlockScratch>();
    auto eigs = std::make_shared<std::uint64_t>(0);
    RunResult res = drive(
        prob, sp, opts, make_state(prob, pick_side(sp), opts.start),
        [&prob, &sp, ws, eigs](IterateState& st, std::span<const std::size_t> is,
                               std::span<const std::size_t> js) {
            block_step(prob, sp, st, is, js, *ws, eigs.get());
        },
        [&prob, ws](IterateState& st) { scalar_drift_check(prob, st, ws->base); });
    res.eig_decompositions = *eigs;
    return res;
}

// --- baselines -----------------------------------------------------------------

SolverParams spdc_params(const Problem& prob, std::size_t m, ThetaMode mode, LambdaPolicy policy) {
    const std::size_t n = prob.n_blocks(), p = prob.p_blocks();
    const double Lambda =
        policy == LambdaPolicy::exact
            ? scale_constant_exact(prob.a, prob.dual_part, prob.primal_part, p, m)
            : scale_constant_heuristic(prob.a, prob.dual_part, prob.primal_part, p, m);
    return compute_params(n, p, p, m, prob.lambda(), prob.gamma(), Lambda, mode);
}

RunResult spdc_run(const Problem& prob, std::size_t m, const RunOptions& opts, ThetaMode mode,
                   LambdaPolicy policy) {
    return dspdc_run(prob, spdc_params(prob, m, mode, policy), opts);
}

RunResult run_dspdc_auto(const Problem& prob, const SolverParams& sp, const RunOptions& opts) {
    if (!prob.dual_part.is_all_ones() || !prob.primal_part.is_all_ones() ||
        prob.reg.kind == Regularizer::Kind::psd_frobenius)
        return bdspdc_run(prob, sp, opts);
    if (prob.a.storage() == DataMatrix::Storage::factorized)
        return dspdc_factorized_run(prob, sp, opts);
    return dspdc_run(prob, sp, opts);
}

}  // namespace dspdc
