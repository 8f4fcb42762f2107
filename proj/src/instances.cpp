#include "dspdc/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dspdc/errors.hpp"
#include "dspdc/rng.hpp"
#include "dspdc/vec.hpp"

namespace dspdc {

Problem gen_synthetic(std::size_t n, std::size_t p, double lambda1, double lambda2,
                      std::uint64_t seed) {
    if (n == 0 || p == 0) throw std::invalid_argument("gen_synthetic: n, p must be positive");
    Rng rng(seed);
    DenseMatrix x(n, p);
    for (double& v : x.values) v = rng.next_normal();

    const std::size_t beta_len = std::min<std::size_t>(p, 50);
    std::vector<SmoothLoss> losses;
    losses.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < beta_len; ++j) z += x.at(i, j);
        const double sig = 1.0 / (1.0 + std::exp(-z));
        const double b = rng.next_uniform() < sig ? 1.0 : -1.0;
        losses.push_back(SmoothLoss::smoothed_hinge(b));
    }

    nlohmann::json prov{{"generator", "synthetic"}, {"n", n},           {"p", p},
                        {"lambda1", lambda1},       {"lambda2", lambda2}, {"seed", seed}};
    return make_scalar_problem(DataMatrix::dense(std::move(x)), std::move(losses),
                               Regularizer::elastic_net(lambda2, lambda1), std::move(prov));
}

namespace {

Problem reduce(const Problem& base, std::size_t d, std::uint64_t seed, bool feature_side) {
    const std::size_t n = base.n_rows(), p = base.p_cols();
    const std::size_t limit = feature_side ? p : n;
    if (d == 0 || d >= limit)
        throw std::invalid_argument(feature_side
                                        ? "gen_factorized: need 0 < d < feature count"
                                        : "gen_factorized_reduced: need 0 < d < instance count");
    const DenseMatrix x = base.a.materialize();
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));

    DenseMatrix u(n, d), vt(p, d);
    if (feature_side) {
        // G: d x p, N(0, 1/d); U = X G^T, V = G.
        DenseMatrix g(d, p);
        for (double& v : g.values) v = rng.next_normal() * scale;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) u.at(i, k) = dot(x.row(i), g.row(k));
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < d; ++k) vt.at(j, k) = g.at(k, j);
    } else {
        // G: d x n; U = G^T, V = G X.
        DenseMatrix g(d, n);
        for (double& v : g.values) v = rng.next_normal() * scale;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) u.at(i, k) = g.at(k, i);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < p; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += g.at(k, i) * x.at(i, j);
                vt.at(j, k) = s;
            }
    }

    Problem out = base;
    out.a = DataMatrix::factorized(std::move(u), std::move(vt));
    out.closed_form.reset();
    out.provenance = {{"generator", feature_side ? "factorized" : "factorized_reduced"},
                      {"d", d},
                      {"seed", seed},
                      {"base", base.provenance}};
    out.validate();
    return out;
}

}  // namespace

Problem gen_factorized(const Problem& base, std::size_t d, std::uint64_t seed) {
    return reduce(base, d, seed, /*feature_side=*/true);
}

Problem gen_factorized_reduced(const Problem& base, std::size_t d, std::uint64_t seed) {
    return reduce(base, d, seed, /*feature_side=*/false);
}

Problem gen_matrix_risk(std::size_t n, std::size_t p, std::size_t d, double lambda,
                        std::uint64_t seed) {
    if (n == 0 || p == 0 || d == 0)
        throw std::invalid_argument("gen_matrix_risk: n, p, d must be positive");
    Rng rng(seed);
    const std::size_t dd = d * d;
    DenseMatrix x(n, p * dd);
    std::vector<SmoothLoss> losses;
    losses.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double trace_sum = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c) {
                    const double v = rng.next_normal();
                    x.at(i, j * dd + r * d + c) = v;
                    if (r == c) trace_sum += v;
                }
        losses.push_back(SmoothLoss::smoothed_hinge(trace_sum > 0.0 ? 1.0 : -1.0));
    }

    Problem prob{.a = DataMatrix::dense(std::move(x)),
                 .losses = std::move(losses),
                 .reg = Regularizer::psd_frobenius(lambda, d),
                 .dual_part = BlockPartition::all_ones(n),
                 .primal_part = BlockPartition::uniform(p, dd),
                 .provenance = {{"generator", "matrix_risk"},
                                {"n", n},
                                {"p", p},
                                {"d", d},
                                {"lambda", lambda},
                                {"seed", seed}},
                 .closed_form = std::nullopt};
    prob.validate();
    return prob;
}

LowerBoundInstance gen_lower_bound(std::size_t n, double q_cond) {
    if (n < 2) throw std::invalid_argument("gen_lower_bound: n must be at least 2");
    if (!(q_cond > 1.0)) throw std::invalid_argument("gen_lower_bound: Q must exceed 1");

    const double sq = std::sqrt(q_cond);
    const double r = (sq - 1.0) / (sq + 1.0);
    const double xi = (sq + 3.0) / (sq + 1.0);
    const double lambda = (q_cond - 1.0) / 4.0;
    const double gamma = static_cast<double>(n);

    DenseMatrix s(n, n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double j = static_cast<double>(k + 1);  // 1-based index
        s.at(k, k) = std::sqrt((j + 1.0) / j);
        s.at(k, k + 1) = -std::sqrt(j / (j + 1.0));
    }
    s.at(n - 1, n - 1) = std::sqrt(xi - static_cast<double>(n - 1) / static_cast<double>(n));

    const double c = static_cast<double>(n) * lambda;  // n (Q - 1) / 4
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a.at(i, j) = -c * s.at(j, i);

    std::vector<double> y_star(n);
    double rp = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        rp *= r;
        y_star[j] = rp;
    }
    std::vector<double> x_star(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < n; ++j) v += s.at(i, j) * y_star[j];
        x_star[i] = v;
    }

    std::vector<SmoothLoss> losses;
    losses.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        losses.push_back(SmoothLoss::square_scaled(i == 0 ? -c : 0.0, gamma));

    Problem prob = make_scalar_problem(
        DataMatrix::dense(std::move(a)), std::move(losses), Regularizer::l2(lambda),
        {{"generator", "lower_bound"}, {"n", n}, {"Q", q_cond}});
    prob.closed_form = SaddlePoint{x_star, y_star};

    return LowerBoundInstance{.n = n,
                              .q_cond = q_cond,
                              .s = std::move(s),
                              .xi = xi,
                              .r = r,
                              .x_star = std::move(x_star),
                              .y_star = std::move(y_star),
                              .lambda = lambda,
                              .gamma = gamma,
                              .lambda11_bound = gamma * gamma * (q_cond - 1.0) * (q_cond - 1.0) /
                                                8.0,
                              .problem = std::move(prob)};
}

LibsvmData parse_libsvm(std::istream& source) {
    std::vector<Triplet> entries;
    std::vector<double> labels;
    std::size_t p = 0;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(source, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream ls(line);
        double label;
        if (!(ls >> label)) throw parse_error("malformed label", line_no);
        const std::size_t row = labels.size();
        std::size_t prev_idx = 0;
        std::string tok;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw parse_error("expected <index>:<value>, got '" + tok + "'", line_no);
            std::size_t idx = 0, pos = 0;
            try {
                idx = std::stoull(tok.substr(0, colon), &pos);
            } catch (const std::exception&) {
                throw parse_error("non-numeric index in '" + tok + "'", line_no);
            }
            if (pos != colon || idx == 0)
                throw parse_error("indices are positive 1-based integers, got '" + tok + "'",
                                  line_no);
            if (idx <= prev_idx)
                throw parse_error("indices must be strictly increasing, got " +
                                      std::to_string(idx) + " after " + std::to_string(prev_idx),
                                  line_no);
            double value = 0.0;
            try {
                const std::string vs = tok.substr(colon + 1);
                value = std::stod(vs, &pos);
                if (pos != vs.size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw parse_error("non-numeric value in '" + tok + "'", line_no);
            }
            prev_idx = idx;
            p = std::max(p, idx);
            entries.push_back({row, idx - 1, value});
        }
        labels.push_back(label);
    }
    if (labels.empty()) throw parse_error("no rows");
    return {DataMatrix::sparse(labels.size(), p, entries), std::move(labels)};
}

void write_libsvm(std::ostream& out, const DataMatrix& matrix, std::span<const double> labels) {
    if (labels.size() != matrix.rows())
        throw std::invalid_argument("write_libsvm: one label per row required");
    std::vector<double> row(matrix.cols());
    char buf[64];
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", labels[i]);
        out << buf;
        std::fill(row.begin(), row.end(), 0.0);
        matrix.add_row_scaled(i, 1.0, row);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 0.0) continue;
            std::snprintf(buf, sizeof buf, " %zu:%.17g", j + 1, row[j]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace dspdc
