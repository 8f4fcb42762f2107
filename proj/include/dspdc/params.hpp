#pragma once

#include <cstddef>

namespace dspdc {

enum class ThetaMode { distance, gap };

// Step sizes and extrapolation weight for a (q, m)-sampled run on a problem
// with n dual blocks, p primal blocks, regularizer strong convexity lambda,
// conjugate-loss strong convexity gamma, and scale constant Lambda >= Lambda_{q,m}.
struct SolverParams {
    std::size_t n = 0, p = 0, q = 0, m = 0;
    double lambda = 0.0, gamma = 0.0, Lambda = 0.0;
    double tau = 0.0;    // primal step
    double sigma = 0.0;  // dual step
    double theta = 0.0;  // extrapolation weight, 0 < theta < p/q
    ThetaMode mode = ThetaMode::distance;

    // Throws consistency_error when the closed-form relations between
    // (tau, sigma, theta) and the inputs are violated:
    //   tau sigma = n m q / (4 p Lambda)                     (1e-12 relative)
    //   p/(2 q lambda tau) + p/q = n^2/(2 m gamma sigma) + n/m (1e-10 relative)
    //   0 < theta < p/q
    void validate() const;
};

// Closed-form step sizes and extrapolation weight. `distance` mode targets
// the iterate-distance rate; `gap` mode targets the primal-dual gap rate
// (smaller theta). All inputs must be positive, m <= n, q <= p.
SolverParams compute_params(std::size_t n, std::size_t p, std::size_t q, std::size_t m,
                            double lambda, double gamma, double Lambda,
                            ThetaMode mode = ThetaMode::distance);

// Per-iteration contraction factors certified for the two modes:
//   distance: 1 - 1 / (max(p/q, n/m) + sqrt(Lambda/(lambda gamma n)) * n p / (m q))
//   gap:      1 - 1 / (2 sqrt(Lambda/(lambda gamma n)) * n p / (m q) + 2 max(p/q, n/m))
double distance_rate(std::size_t n, std::size_t p, std::size_t q, std::size_t m, double lambda,
                     double gamma, double Lambda);
double gap_rate(std::size_t n, std::size_t p, std::size_t q, std::size_t m, double lambda,
                double gamma, double Lambda);

}  // namespace dspdc
