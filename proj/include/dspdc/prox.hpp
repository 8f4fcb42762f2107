#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace dspdc {

// Smooth convex loss phi_i with (1/gamma)-Lipschitz gradient, so its
// conjugate phi_i* is gamma-strongly convex. gamma is stored explicitly so
// solver parameter computation never re-derives smoothness.
struct SmoothLoss {
    enum class Kind { square, logistic, smoothed_hinge };

    Kind kind = Kind::square;
    double b = 0.0;      // label / shift
    double gamma = 0.5;  // conjugate strong convexity

    // phi(z) = (z - b)^2, gamma = 1/2.
    static SmoothLoss square(double b) { return {Kind::square, b, 0.5}; }
    // Generalized quadratic phi(z) = (z - b)^2 / (2 gamma); conjugate
    // b beta + gamma beta^2 / 2. Used by instances that specify the loss
    // through its conjugate.
    static SmoothLoss square_scaled(double b, double gamma);
    // phi(z) = log(1 + exp(-b z)), gamma = 4.
    static SmoothLoss logistic(double b) { return {Kind::logistic, b, 4.0}; }
    // 0 if bz >= 1; 1/2 - bz if bz <= 0; (1 - bz)^2 / 2 otherwise; gamma = 1.
    static SmoothLoss smoothed_hinge(double b) { return {Kind::smoothed_hinge, b, 1.0}; }

    double value(double z) const;
    double grad(double z) const;
    // Conjugate phi*(beta); +infinity outside the conjugate domain.
    double conjugate(double beta) const;
    bool conjugate_feasible(double beta) const;
};

double loss_value(const SmoothLoss& loss, double z);
double loss_grad(const SmoothLoss& loss, double z);
double conjugate_value(const SmoothLoss& loss, double beta);

// argmax over beta of (1/n) u beta - (1/n) phi*(beta) - (beta - y)^2 / (2 sigma).
// Closed form for square and smoothed hinge; safeguarded Newton (bracketed
// inside the open conjugate domain, tolerance 1e-12, <= 50 iterations,
// bisection fallback on overshoot) for logistic.
double dual_prox(const SmoothLoss& loss, double u, double y, double sigma, std::size_t n);

// Separable coordinate regularizer family, or the PSD-cone Frobenius
// regularizer applied to square matrix blocks.
struct Regularizer {
    enum class Kind { l2, elastic_net, psd_frobenius };

    Kind kind = Kind::l2;
    double lambda = 0.0;  // strong convexity modulus (lambda2 for elastic net)
    double l1 = 0.0;      // l1 weight, elastic net only
    std::size_t dim = 0;  // matrix side d, psd only (block length d*d)

    // g_j(a) = lambda a^2 / 2.
    static Regularizer l2(double lambda);
    // g_j(a) = lambda2 a^2 / 2 + lambda1 |a|.
    static Regularizer elastic_net(double lambda2, double lambda1);
    // g_j(X) = (lambda/2) ||X||_F^2 + indicator(X psd), X a d x d block.
    static Regularizer psd_frobenius(double lambda, std::size_t d);

    bool has_conjugate() const { return kind != Kind::psd_frobenius; }
    std::size_t block_len() const { return kind == Kind::psd_frobenius ? dim * dim : 1; }

    double value_scalar(double a) const;
    // Block value; +infinity when a PSD block falls outside the cone beyond
    // a -1e-10 eigenvalue tolerance.
    double block_value(std::span<const double> x) const;
    double conjugate_scalar(double u) const;       // throws unsupported_operation for psd
    double grad_conjugate_scalar(double u) const;  // nabla g* coordinate, for dual-only solvers
};

double regularizer_value(const Regularizer& reg, double a);
double regularizer_conjugate(const Regularizer& reg, double u);

// argmin over a of (1/n) v a + g_j(a) + (a - xbar)^2 / (2 tau); closed forms.
double primal_prox(const Regularizer& reg, double v, double xbar, double tau, std::size_t n);

/// argmin over psd X of (1/n) <G, X> + (lambda/2) ||X||_F^2 + ||X - Xbar||_F^2 / (2 tau):
// eigendecompose C = (Xbar / tau - sym(G) / n) / (lambda + 1/tau) and clamp
// negative eigenvalues. Matrices are d x d row-major spans of length d*d;
// Xbar must be symmetric within 1e-10. Each call increments *eig_counter
// (when non-null) once per eigendecomposition.
void psd_prox(std::span<const double> g, std::span<const double> xbar, double tau, double lambda,
              std::size_t n, std::size_t d, std::span<double> out,
              std::uint64_t* eig_counter = nullptr);

}  // namespace dspdc
