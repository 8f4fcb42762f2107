#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dspdc {

// Full eigendecomposition of a symmetric d x d matrix (row-major) by cyclic
// Jacobi sweeps. On return `eigvals[k]` pairs with the eigenvector stored in
// column k of `eigvecs` (row-major d x d). Sweeps run until the off-diagonal
// Frobenius norm drops below `off_diag_tol` times the matrix scale.
// Deterministic; throws numerical_error if the tolerance is not met within
// max_sweeps.
void jacobi_eigen_sym(std::span<const double> m, std::size_t d, std::span<double> eigvals,
                      std::span<double> eigvecs, double off_diag_tol = 1e-12,
                      std::size_t max_sweeps = 64);

// Smallest eigenvalue of a symmetric d x d matrix.
double min_eigenvalue_sym(std::span<const double> m, std::size_t d);

}  // namespace dspdc
