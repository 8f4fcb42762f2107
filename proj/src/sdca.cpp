#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dspdc/errors.hpp"
#include "dspdc/newton.hpp"
#include "dspdc/rng.hpp"
#include "dspdc/solver.hpp"
#include "dspdc/vec.hpp"

namespace dspdc {

namespace {

// <a_i, x(beta)> and its beta-derivative, where x(beta) = grad g*(v - (beta -
// y_i) a_i / n) and only the support of a_i moves.
struct AxAlongRow {
    std::span<const double> row;  // dense copy of a_i
    std::span<const double> v;
    double yi, nb;
    const Regularizer* reg;

    std::pair<double, double> operator()(double beta) const {
        double s = 0.0, ds = 0.0;
        const bool elastic = reg->kind == Regularizer::Kind::elastic_net;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double aij = row[j];
            if (aij == 0.0) continue;
            const double w = v[j] - (beta - yi) * aij / nb;
            if (elastic) {
                if (w > reg->l1) {
                    s += aij * (w - reg->l1) / reg->lambda;
                    ds -= aij * aij / (nb * reg->lambda);
                } else if (w < -reg->l1) {
                    s += aij * (w + reg->l1) / reg->lambda;
                    ds -= aij * aij / (nb * reg->lambda);
                }
            } else {
                s += aij * w / reg->lambda;
                ds -= aij * aij / (nb * reg->lambda);
            }
        }
        return {s, ds};
    }
};

// Exact coordinate ascent in y_i: solve <a_i, x(beta)> = phi_i*'(beta).
double coordinate_max(const SmoothLoss& loss, const AxAlongRow& ax, double yi) {
    if (loss.kind == SmoothLoss::Kind::logistic) {
        // Substitute s = b beta in (-1, 0); the root equation becomes
        // b <a_i, x(b s)> - log((1 + s) / (-s)) = 0, strictly decreasing in s.
        const double b = loss.b;
        auto fd = [&](double s) {
            const auto [axv, daxv] = ax(b * s);
            const double f = b * axv - std::log1p(s) + std::log(-s);
            const double fp = daxv - 1.0 / (1.0 + s) + 1.0 / s;
            return std::pair<double, double>(f, fp);
        };
        const double lo = -1.0 + 1e-14, hi = -1e-14;
        if (fd(lo).first <= 0.0) return b * lo;
        if (fd(hi).first >= 0.0) return b * hi;
        return b * newton_bisect_root(fd, lo, hi);
    }

    // phi*' is b + gamma beta for square, b + beta for smoothed hinge (with a
    // domain clamp applied afterwards); both keep psi strictly decreasing.
    const double curvature = loss.kind == SmoothLoss::Kind::square ? loss.gamma : 1.0;
    auto fd = [&](double beta) {
        const auto [axv, daxv] = ax(beta);
        return std::pair<double, double>(axv - loss.b - curvature * beta, daxv - curvature);
    };
    double width = 1.0, lo = yi - width, hi = yi + width;
    for (std::size_t k = 0; fd(lo).first < 0.0; ++k) {
        width *= 2.0;
        lo = yi - width;
        if (k > 200) throw numerical_error("sdca: bracket expansion failed");
    }
    width = 1.0;
    for (std::size_t k = 0; fd(hi).first > 0.0; ++k) {
        width *= 2.0;
        hi = yi + width;
        if (k > 200) throw numerical_error("sdca: bracket expansion failed");
    }
    double beta = newton_bisect_root(fd, lo, hi);
    if (loss.kind == SmoothLoss::Kind::smoothed_hinge)
        beta = loss.b * std::clamp(loss.b * beta, -1.0, 0.0);
    return beta;
}

}  // namespace

RunResult sdca_run(const Problem& prob, const RunOptions& opts) {
    prob.validate();
    if (!prob.reg.has_conjugate())
        throw unsupported_operation("sdca_run: the regularizer has no conjugate, so the dual "
                                    "objective this method ascends is unavailable");
    if (!prob.dual_part.is_all_ones() || !prob.primal_part.is_all_ones())
        throw std::invalid_argument("sdca_run: block partitions are not supported");
    for (std::size_t k = 0; k < opts.checkpoints.size(); ++k)
        if (opts.checkpoints[k] == 0 || (k > 0 && opts.checkpoints[k] <= opts.checkpoints[k - 1]))
            throw std::invalid_argument("RunOptions: checkpoints must be strictly increasing and positive");

    const std::size_t n = prob.n_rows(), p = prob.p_cols();
    const double nb = static_cast<double>(n);

    RunResult res;
    IterateState& st = res.state;
    st.maintained = IterateState::Maintained::at_ybar;
    st.y.assign(n, 0.0);
    if (opts.start) {
        if (opts.start->y.size() != n)
            throw std::invalid_argument("sdca_run: start point has wrong dimensions");
        st.y = opts.start->y;
    }
    // v = -A^T y / n lives in aty (up to sign convention local to this
    // solver); x = grad g*(v) is maintained exactly.
    std::vector<double>& v = st.aty;
    v.assign(p, 0.0);
    prob.a.apply_transpose(st.y, v);
    for (double& vj : v) vj = -vj / nb;
    st.x.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) st.x[j] = prob.reg.grad_conjugate_scalar(v[j]);
    st.x_prev = st.x;
    st.x_bar = st.x;
    st.y_bar = st.y;

    Rng rng(opts.seed);
    std::vector<double> row(p);

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
    const double dist0 = opts.reference ? distance_sq(st.x, st.y, opts.reference->point) : 0.0;
    std::size_t next_cp = 0;

    for (std::size_t t = 1; t <= opts.max_iters; ++t) {
        const std::size_t i = static_cast<std::size_t>(rng.next_below(n));
        std::fill(row.begin(), row.end(), 0.0);
        prob.a.add_row_scaled(i, 1.0, row);

        const AxAlongRow ax{row, v, st.y[i], nb, &prob.reg};
        const double beta = coordinate_max(prob.losses[i], ax, st.y[i]);
        const double delta = beta - st.y[i];
        if (delta != 0.0) {
            st.y[i] = beta;
            st.y_bar[i] = beta;
            for (std::size_t j = 0; j < p; ++j) {
                if (row[j] == 0.0) continue;
                v[j] -= delta * row[j] / nb;
                const double xj = prob.reg.grad_conjugate_scalar(v[j]);
                st.x[j] = xj;
                st.x_prev[j] = xj;
                st.x_bar[j] = xj;
            }
        }
        st.iteration = t;
        if (opts.observer) opts.observer(st);
        if (opts.drift_check_every != 0 && t % opts.drift_check_every == 0) {
            std::vector<double> fresh(p, 0.0);
            prob.a.apply_transpose(st.y, fresh);
            double scale = 1.0, diff = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                fresh[j] = -fresh[j] / nb;
                scale = std::max(scale, std::abs(fresh[j]));
                diff = std::max(diff, std::abs(fresh[j] - v[j]));
            }
            if (diff > 1e-8 * scale)
                throw consistency_error("maintained product drift: -A^T y / n deviates from "
                                        "recomputation by " + std::to_string(diff));
        }
        if (next_cp < opts.checkpoints.size() && opts.checkpoints[next_cp] == t) {
            ++next_cp;
            const TraceRecord r = record(t);
            if (opts.reference && distance_sq(st.x, st.y, opts.reference->point) > 10.0 * dist0)
                res.divergence_warning = true;
            if (opts.gap_tolerance > 0.0 && r.gap && *r.gap <= opts.gap_tolerance) {
                res.stopped_early = true;
                break;
            }
        }
    }
    return res;
}

}  // namespace dspdc
