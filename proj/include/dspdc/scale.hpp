#pragma once

#include <cstddef>
#include <optional>

#include "dspdc/matrix.hpp"

namespace dspdc {

// Squared spectral norm of a dense matrix via power iteration on the Gram
// matrix of the smaller side. Deterministic all-ones normalized start,
// relative tolerance 1e-10 on the Rayleigh quotient, at most 500 iterations.
double spectral_norm_sq(const DenseMatrix& m, double tol = 1e-10, std::size_t max_iters = 500);
double spectral_norm_sq(const DataMatrix& a, double tol = 1e-10, std::size_t max_iters = 500);

// Number of (row-subset, column-subset) pairs |I| = m, |J| = q, clamped at
// `cap` (returns cap + 1 when the true count exceeds it).
std::size_t subset_pair_count(std::size_t n_blocks, std::size_t m, std::size_t p_blocks,
                              std::size_t q, std::size_t cap);

// Exact scale constant Lambda_{q,m} = max over |I| = m row blocks and |J| = q
// column blocks of ||A_I^J||_2^2, by enumeration of all subset pairs. Throws
// capacity_error (pointing the caller at scale_constant_heuristic) when the
// pair count exceeds enumeration_cap.
double scale_constant_exact(const DataMatrix& a, const BlockPartition& row_part,
                            const BlockPartition& col_part, std::size_t q, std::size_t m,
                            std::size_t enumeration_cap = 100'000);

// Convenience overload with all-ones partitions (scalar coordinates).
double scale_constant_exact(const DataMatrix& a, std::size_t q, std::size_t m,
                            std::size_t enumeration_cap = 100'000);

// Heuristic upper-bound surrogate Lambda ~= (m q / p) * Lambda_{p,1}, where
// Lambda_{p,1} = max_i ||A_i||_2^2 is the largest squared row-block spectral
// norm (squared row norm for scalar rows). Exact for (q, m) = (p, 1).
double scale_constant_heuristic(const DataMatrix& a, const BlockPartition& row_part,
                                const BlockPartition& col_part, std::size_t q, std::size_t m);
double scale_constant_heuristic(const DataMatrix& a, std::size_t q, std::size_t m);

// Largest squared row-block spectral norm Lambda_{p,1}.
double max_row_block_norm_sq(const DataMatrix& a, const BlockPartition& row_part);

// Condition-number style ratio Lambda_{p,1} / (lambda gamma).
double condition_number(const DataMatrix& a, const BlockPartition& row_part, double lambda,
                        double gamma);

}  // namespace dspdc
