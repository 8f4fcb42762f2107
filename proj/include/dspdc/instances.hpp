#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dspdc/matrix.hpp"
#include "dspdc/problem.hpp"

namespace dspdc {

// Generators return fully assembled problems with provenance filled in; all
// are pure functions of their parameters and seed.

// i.i.d. standard normal X (n x p), labels b_i = +-1 with
// Pr(b_i = 1) = 1 / (1 + exp(-<x_i, beta>)) for beta with ones on the first
// min(p, 50) coordinates, smoothed-hinge losses, elastic-net regularizer.
Problem gen_synthetic(std::size_t n, std::size_t p, double lambda1, double lambda2,
                      std::uint64_t seed);

// Randomized feature reduction of an existing problem: A = X G^T G with G
// (d x p) of i.i.d. N(0, 1/d) entries, stored factorized as U = X G^T,
// V = G. Losses, labels, and regularizer carry over. Requires d < p.
Problem gen_factorized(const Problem& base, std::size_t d, std::uint64_t seed);

// Instance-reduction mirror: A = G^T G X with G (d x n), stored as U = G^T,
// V = G X. Requires d < n.
Problem gen_factorized_reduced(const Problem& base, std::size_t d, std::uint64_t seed);

// Multiple-matrix risk minimization: row i concatenates p vectorized d x d
// standard Gaussian matrices D_i^j; b_i = 1 iff sum_j trace(D_i^j) > 0;
// smoothed-hinge losses; PSD-cone Frobenius regularizer on p primal blocks
// of size d^2.
Problem gen_matrix_risk(std::size_t n, std::size_t p, std::size_t d, double lambda,
                        std::uint64_t seed);

// Adversarial bidiagonal instance with a closed-form optimum.
struct LowerBoundInstance {
    std::size_t n = 0;
    double q_cond = 0.0;  // conditioning parameter Q > 1
    DenseMatrix s;        // upper-bidiagonal n x n
    double xi = 0.0;      // (sqrt(Q) + 3) / (sqrt(Q) + 1)
    double r = 0.0;       // (sqrt(Q) - 1) / (sqrt(Q) + 1)
    std::vector<double> x_star, y_star;  // y*_j = r^{j+1} (0-based), x* = S y*
    double lambda = 0.0;                 // (Q - 1) / 4
    double gamma = 0.0;                  // n
    double lambda11_bound = 0.0;         // n^2 (Q - 1)^2 / 8
    Problem problem;                     // closed form attached
};

// Builds the instance above: A = -(n (Q - 1) / 4) S^T, quadratic losses with
// gamma = n and b_1 = -n (Q - 1) / 4 (zero elsewhere), l2 regularizer with
// lambda = (Q - 1) / 4. Requires n >= 2, Q > 1.
LowerBoundInstance gen_lower_bound(std::size_t n, double q_cond);

struct LibsvmData {
    DataMatrix matrix;  // sparse
    std::vector<double> labels;
};

// Parses `<label> <index>:<value> ...` lines with 1-based strictly
// increasing indices; '#'-prefixed comment lines and blank lines are
// skipped; p = max index seen. Errors carry 1-based line numbers.
LibsvmData parse_libsvm(std::istream& source);

// Inverse of parse_libsvm for round-trip tests and dataset export.
void write_libsvm(std::ostream& out, const DataMatrix& matrix, std::span<const double> labels);

}  // namespace dspdc
