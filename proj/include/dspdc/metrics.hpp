#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "dspdc/params.hpp"
#include "dspdc/problem.hpp"

namespace dspdc {

// P(x) = (1/n) sum_i phi_i(<a_i, x>) + sum_j g_j(x_j). Compensated sums;
// +infinity when a PSD block leaves the cone beyond tolerance.
double primal_objective(const Problem& prob, std::span<const double> x);

// D(y) = -g*(-A^T y / n) - (1/n) sum_i phi_i*(y_i); -infinity when y leaves
// the conjugate domain; std::nullopt when g* is unsupported (PSD regularizer).
std::optional<double> dual_objective(const Problem& prob, std::span<const double> y);

// P(x) - D(y); std::nullopt when the dual is unavailable.
std::optional<double> duality_gap(const Problem& prob, std::span<const double> x,
                                  std::span<const double> y);

// Plain squared Euclidean distance ||x - x*||^2 + ||y - y*||^2.
double distance_sq(std::span<const double> x, std::span<const double> y, const SaddlePoint& ref);

// Theorem-1 weighted potential
//   Omega(x, y) = (p/(2 q tau) + p lambda / q) ||x - x*||^2
//               + (n/(4 m sigma) + gamma / m) ||y - y*||^2,
// and its t = 0 variant with dual weight n/(2 m sigma) + gamma / m.
double omega_potential(const SolverParams& sp, std::span<const double> x, std::span<const double> y,
                       const SaddlePoint& ref, bool initial);

// Max-norm residual of the saddle-point prox fixed-point conditions at unit
// step sizes: x_j = prox_g(x_j - centered A^T y / n), y_i = prox_phi*(...).
// Defined for every regularizer kind, including PSD blocks.
double stationarity_residual(const Problem& prob, std::span<const double> x,
                             std::span<const double> y);

struct ReferenceSolution {
    SaddlePoint point;
    // Duality gap at certification; when the dual objective is unavailable
    // (PSD regularizer) this stores the stationarity residual instead.
    double gap_at_certification = 0.0;
    std::string source;  // "closed_form", "high_precision_run", or "cache"
    std::uint64_t provenance_hash = 0;
};

struct CertifyOptions {
    std::size_t max_iters = 2'000'000;
    double gap_target = 1e-12;
    double residual_target = 1e-10;  // used when the duality gap is unavailable
    bool use_cache = true;           // consult DSPDC_REFERENCE_CACHE (or cache_dir)
    std::string cache_dir;           // overrides the environment variable when set
};

// Name of the environment variable holding the reference-cache directory.
extern const char* const kReferenceCacheEnv;

// Returns the problem's closed form when it carries one; otherwise runs
// full-batch gap-mode DSPDC until the duality gap (or, when unavailable, the
// stationarity residual) falls below target. Certified solutions are cached
// keyed by problem provenance; cache files use advisory file locking so
// concurrent sweeps can share a directory, and a cache hit returns the stored
// solution bit-for-bit. Throws numerical_error when the budget is exhausted.
ReferenceSolution certify_reference(const Problem& prob, const CertifyOptions& opts = {});

}  // namespace dspdc
