#include "dspdc/scale.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dspdc/errors.hpp"
#include "dspdc/vec.hpp"

namespace dspdc {

namespace {

// Power iteration on the symmetric PSD Gram matrix B (dim x dim, row-major).
double power_iteration_gram(const std::vector<double>& b, std::size_t dim, double tol,
                            std::size_t max_iters) {
    if (dim == 0) return 0.0;
    std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    std::vector<double> w(dim);
    double lambda = 0.0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        for (std::size_t i = 0; i < dim; ++i)
            w[i] = dot({b.data() + i * dim, dim}, {v.data(), dim});
        const double rayleigh = dot({v.data(), dim}, {w.data(), dim});
        const double wn = std::sqrt(norm_sq({w.data(), dim}));
        if (wn == 0.0) return 0.0;  // start vector in the null space; norm is 0 along it
        for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / wn;
        if (it > 0 && std::abs(rayleigh - lambda) <= tol * std::max(1.0, std::abs(rayleigh))) {
            lambda = rayleigh;
            break;
        }
        lambda = rayleigh;
    }
    return lambda;
}

// Gram matrix of the smaller side of an n x p dense block, given through an
// entry accessor.
template <typename Entry>
double spectral_norm_sq_impl(std::size_t n, std::size_t p, Entry entry, double tol,
                             std::size_t max_iters) {
    if (n == 0 || p == 0) return 0.0;
    const bool use_cols = p <= n;  // B = A^T A (p x p) or A A^T (n x n)
    const std::size_t dim = use_cols ? p : n;
    std::vector<double> b(dim * dim, 0.0);
    if (use_cols) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                const double aij = entry(i, j);
                if (aij == 0.0) continue;
                for (std::size_t k = 0; k < p; ++k) b[j * dim + k] += aij * entry(i, k);
            }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0.0;
                for (std::size_t j = 0; j < p; ++j) s += entry(i, j) * entry(k, j);
                b[i * dim + k] = s;
            }
    }
    return power_iteration_gram(b, dim, tol, max_iters);
}

// Enumerate size-k subsets of {0..count-1} in lexicographic order.
bool next_subset(std::vector<std::size_t>& idx, std::size_t count) {
    const std::size_t k = idx.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (idx[pos] + (k - pos) < count) {
            ++idx[pos];
            for (std::size_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
            return true;
        }
    }
    return false;
}

std::size_t binom_clamped(std::size_t n, std::size_t k, std::size_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // r * (n - k + i) / i, watching for overflow past the cap
        if (r > cap) return cap + 1;
        const std::size_t num = n - k + i;
        if (r > (static_cast<std::size_t>(-1) / num)) return cap + 1;
        r = r * num / i;
    }
    return std::min(r, cap + 1);
}

}  // namespace

double spectral_norm_sq(const DenseMatrix& m, double tol, std::size_t max_iters) {
    return spectral_norm_sq_impl(
        m.rows, m.cols, [&](std::size_t i, std::size_t j) { return m.at(i, j); }, tol, max_iters);
}

double spectral_norm_sq(const DataMatrix& a, double tol, std::size_t max_iters) {
    return spectral_norm_sq_impl(
        a.rows(), a.cols(), [&](std::size_t i, std::size_t j) { return a.entry(i, j); }, tol,
        max_iters);
}

std::size_t subset_pair_count(std::size_t n_blocks, std::size_t m, std::size_t p_blocks,
                              std::size_t q, std::size_t cap) {
    const std::size_t ca = binom_clamped(n_blocks, m, cap);
    const std::size_t cb = binom_clamped(p_blocks, q, cap);
    if (ca == 0 || cb == 0) return 0;
    if (ca > cap || cb > cap) return cap + 1;
    if (ca > cap / cb) return cap + 1;
    const std::size_t prod = ca * cb;
    return prod > cap ? cap + 1 : prod;
}

double scale_constant_exact(const DataMatrix& a, const BlockPartition& row_part,
                            const BlockPartition& col_part, std::size_t q, std::size_t m,
                            std::size_t enumeration_cap) {
    const std::size_t n = row_part.blocks(), p = col_part.blocks();
    if (row_part.total() != a.rows() || col_part.total() != a.cols())
        throw std::invalid_argument("scale_constant_exact: partition totals do not match matrix");
    if (m == 0 || m > n || q == 0 || q > p)
        throw std::invalid_argument("scale_constant_exact: need 1 <= m <= n and 1 <= q <= p");
    const std::size_t pairs = subset_pair_count(n, m, p, q, enumeration_cap);
    if (pairs > enumeration_cap)
        throw capacity_error("scale_constant_exact: C(" + std::to_string(n) + "," + std::to_string(m) +
                             ")*C(" + std::to_string(p) + "," + std::to_string(q) + ") exceeds cap " +
                             std::to_string(enumeration_cap) + "; use scale_constant_heuristic");

    double best = 0.0;
    std::vector<std::size_t> bi(m), bj(q);
    for (std::size_t k = 0; k < m; ++k) bi[k] = k;
    do {
        // scalar row indices covered by the selected row blocks
        std::vector<std::size_t> ri;
        for (std::size_t k : bi)
            for (std::size_t r = 0; r < row_part.size(k); ++r) ri.push_back(row_part.offset(k) + r);
        for (std::size_t k = 0; k < q; ++k) bj[k] = k;
        do {
            std::vector<std::size_t> cj;
            for (std::size_t k : bj)
                for (std::size_t c = 0; c < col_part.size(k); ++c) cj.push_back(col_part.offset(k) + c);
            const double s = spectral_norm_sq_impl(
                ri.size(), cj.size(),
                [&](std::size_t i, std::size_t j) { return a.entry(ri[i], cj[j]); }, 1e-10, 500);
            best = std::max(best, s);
        } while (next_subset(bj, p));
    } while (next_subset(bi, n));
    return best;
}

double scale_constant_exact(const DataMatrix& a, std::size_t q, std::size_t m,
                            std::size_t enumeration_cap) {
    return scale_constant_exact(a, BlockPartition::all_ones(a.rows()),
                                BlockPartition::all_ones(a.cols()), q, m, enumeration_cap);
}

double max_row_block_norm_sq(const DataMatrix& a, const BlockPartition& row_part) {
    if (row_part.total() != a.rows())
        throw std::invalid_argument("max_row_block_norm_sq: partition total does not match matrix");
    double best = 0.0;
    for (std::size_t i = 0; i < row_part.blocks(); ++i) {
        const std::size_t r0 = row_part.offset(i), mi = row_part.size(i);
        if (mi == 1) {
            // spectral norm of a single row is its Euclidean norm
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) {
                const double v = a.entry(r0, j);
                s += v * v;
            }
            best = std::max(best, s);
        } else {
            best = std::max(best, spectral_norm_sq_impl(
                                      mi, a.cols(),
                                      [&](std::size_t r, std::size_t j) { return a.entry(r0 + r, j); },
                                      1e-10, 500));
        }
    }
    return best;
}

double scale_constant_heuristic(const DataMatrix& a, const BlockPartition& row_part,
                                const BlockPartition& col_part, std::size_t q, std::size_t m) {
    const std::size_t n = row_part.blocks(), p = col_part.blocks();
    if (m == 0 || m > n || q == 0 || q > p)
        throw std::invalid_argument("scale_constant_heuristic: need 1 <= m <= n and 1 <= q <= p");
    const double lambda_p1 = max_row_block_norm_sq(a, row_part);
    return static_cast<double>(m) * static_cast<double>(q) / static_cast<double>(p) * lambda_p1;
}

double scale_constant_heuristic(const DataMatrix& a, std::size_t q, std::size_t m) {
    return scale_constant_heuristic(a, BlockPartition::all_ones(a.rows()),
                                    BlockPartition::all_ones(a.cols()), q, m);
}

double condition_number(const DataMatrix& a, const BlockPartition& row_part, double lambda,
                        double gamma) {
    if (lambda <= 0.0 || gamma <= 0.0)
        throw std::invalid_argument("condition_number: lambda and gamma must be positive");
    return max_row_block_norm_sq(a, row_part) / (lambda * gamma);
}

}  // namespace dspdc
