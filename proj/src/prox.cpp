#include "dspdc/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dspdc/eigen.hpp"
#include "dspdc/errors.hpp"
#include "dspdc/newton.hpp"

namespace dspdc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

SmoothLoss SmoothLoss::square_scaled(double b, double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("SmoothLoss::square_scaled: gamma must be positive");
    return {Kind::square, b, gamma};
}

double SmoothLoss::value(double z) const {
    switch (kind) {
        case Kind::square: {
            const double r = z - b;
            return r * r / (2.0 * gamma);
        }
        case Kind::logistic: {
            const double t = b * z;
            // stable log(1 + exp(-t))
            return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
        }
        case Kind::smoothed_hinge: {
            const double t = b * z;
            if (t >= 1.0) return 0.0;
            if (t <= 0.0) return 0.5 - t;
            const double r = 1.0 - t;
            return 0.5 * r * r;
        }
    }
    return 0.0;
}

double SmoothLoss::grad(double z) const {
    switch (kind) {
        case Kind::square: return (z - b) / gamma;
        case Kind::logistic: {
            const double t = b * z;
            // -b * sigmoid(-t), stable both directions
            return t >= 0.0 ? -b * std::exp(-t) / (1.0 + std::exp(-t)) : -b / (1.0 + std::exp(t));
        }
        case Kind::smoothed_hinge: {
            const double t = b * z;
            if (t >= 1.0) return 0.0;
            if (t <= 0.0) return -b;
            return -b * (1.0 - t);
        }
    }
    return 0.0;
}

bool SmoothLoss::conjugate_feasible(double beta) const {
    switch (kind) {
        case Kind::square: return true;
        case Kind::logistic:
        case Kind::smoothed_hinge: {
            const double s = b * beta;
            return s >= -1.0 && s <= 0.0;
        }
    }
    return false;
}

double SmoothLoss::conjugate(double beta) const {
    switch (kind) {
        case Kind::square: return b * beta + gamma * beta * beta / 2.0;
        case Kind::logistic: {
            const double s = b * beta;
            if (s < -1.0 || s > 0.0) return kInf;
            return xlogx(-s) + xlogx(1.0 + s);
        }
        case Kind::smoothed_hinge: {
            const double s = b * beta;
            if (s < -1.0 || s > 0.0) return kInf;
            return b * beta + beta * beta / 2.0;
        }
    }
    return kInf;
}

double loss_value(const SmoothLoss& loss, double z) { return loss.value(z); }
double loss_grad(const SmoothLoss& loss, double z) { return loss.grad(z); }
double conjugate_value(const SmoothLoss& loss, double beta) { return loss.conjugate(beta); }

double dual_prox(const SmoothLoss& loss, double u, double y, double sigma, std::size_t n) {
    if (sigma <= 0.0 || n == 0) throw std::invalid_argument("dual_prox: need sigma > 0 and n >= 1");
    const double nd = static_cast<double>(n);
    switch (loss.kind) {
        case SmoothLoss::Kind::square:
            // stationarity: (u - b)/n + y/sigma = beta (gamma/n + 1/sigma)
            return (sigma * (u - loss.b) / nd + y) / (sigma * loss.gamma / nd + 1.0);
        case SmoothLoss::Kind::smoothed_hinge: {
            // unconstrained quadratic maximizer, then projection of b*beta onto [-1, 0]
            const double hat = (sigma * (u - loss.b) / nd + y) / (sigma / nd + 1.0);
            return loss.b * std::clamp(loss.b * hat, -1.0, 0.0);
        }
        case SmoothLoss::Kind::logistic: {
            // In s = b*beta the objective derivative is
            //   h(s) = u b / n - log((1+s)/(-s)) / n - (s - b y) / sigma,
            // strictly decreasing on (-1, 0) with h(-1+) = +inf, h(0-) = -inf.
            const double ub = u * loss.b, by = loss.b * y;
            const double lo = -1.0 + 1e-14, hi = -1e-14;
            auto h = [&](double s) {
                const double f = ub / nd - std::log((1.0 + s) / (-s)) / nd - (s - by) / sigma;
                const double fp = -(1.0 / (1.0 + s) + 1.0 / (-s)) / nd - 1.0 / sigma;
                return std::pair<double, double>(f, fp);
            };
            if (h(lo).first <= 0.0) return loss.b * lo;  // maximizer pinned at the domain edge
            if (h(hi).first >= 0.0) return loss.b * hi;
            return loss.b * newton_bisect_root(h, lo, hi, 1e-12, 50);
        }
    }
    return 0.0;
}

Regularizer Regularizer::l2(double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("Regularizer::l2: lambda must be positive");
    return {Kind::l2, lambda, 0.0, 0};
}

Regularizer Regularizer::elastic_net(double lambda2, double lambda1) {
    if (lambda2 <= 0.0) throw std::invalid_argument("Regularizer::elastic_net: lambda2 must be positive");
    if (lambda1 < 0.0) throw std::invalid_argument("Regularizer::elastic_net: lambda1 must be nonnegative");
    return {Kind::elastic_net, lambda2, lambda1, 0};
}

Regularizer Regularizer::psd_frobenius(double lambda, std::size_t d) {
    if (lambda <= 0.0) throw std::invalid_argument("Regularizer::psd_frobenius: lambda must be positive");
    if (d == 0) throw std::invalid_argument("Regularizer::psd_frobenius: d must be positive");
    return {Kind::psd_frobenius, lambda, 0.0, d};
}

double Regularizer::value_scalar(double a) const {
    switch (kind) {
        case Kind::l2: return 0.5 * lambda * a * a;
        case Kind::elastic_net: return 0.5 * lambda * a * a + l1 * std::abs(a);
        case Kind::psd_frobenius:
            throw unsupported_operation("Regularizer::value_scalar: psd blocks are matrix-valued");
    }
    return 0.0;
}

double Regularizer::block_value(std::span<const double> x) const {
    if (kind != Kind::psd_frobenius) {
        double s = 0.0;
        for (double a : x) s += value_scalar(a);
        return s;
    }
    if (x.size() != dim * dim)
        throw std::invalid_argument("Regularizer::block_value: block length != d*d");
    if (min_eigenvalue_sym(x, dim) < -1e-10) return kInf;
    double fro = 0.0;
    for (double a : x) fro += a * a;
    return 0.5 * lambda * fro;
}

double Regularizer::conjugate_scalar(double u) const {
    switch (kind) {
        case Kind::l2: return u * u / (2.0 * lambda);
        case Kind::elastic_net: {
            const double t = std::max(std::abs(u) - l1, 0.0);
            return t * t / (2.0 * lambda);
        }
        case Kind::psd_frobenius:
            throw unsupported_operation(
                "regularizer_conjugate: unsupported for psd_frobenius (dual objective unavailable)");
    }
    return 0.0;
}

double Regularizer::grad_conjugate_scalar(double u) const {
    switch (kind) {
        case Kind::l2: return u / lambda;
        case Kind::elastic_net: {
            const double t = std::max(std::abs(u) - l1, 0.0);
            return u >= 0.0 ? t / lambda : -t / lambda;
        }
        case Kind::psd_frobenius:
            throw unsupported_operation("grad_conjugate_scalar: unsupported for psd_frobenius");
    }
    return 0.0;
}

double regularizer_value(const Regularizer& reg, double a) { return reg.value_scalar(a); }
double regularizer_conjugate(const Regularizer& reg, double u) { return reg.conjugate_scalar(u); }

double primal_prox(const Regularizer& reg, double v, double xbar, double tau, std::size_t n) {
    if (tau <= 0.0 || n == 0) throw std::invalid_argument("primal_prox: need tau > 0 and n >= 1");
    const double c = xbar / tau - v / static_cast<double>(n);
    switch (reg.kind) {
        case Regularizer::Kind::l2: return c / (reg.lambda + 1.0 / tau);
        case Regularizer::Kind::elastic_net: {
            const double t = std::max(std::abs(c) - reg.l1, 0.0);
            return (c >= 0.0 ? t : -t) / (reg.lambda + 1.0 / tau);
        }
        case Regularizer::Kind::psd_frobenius:
            throw unsupported_operation("primal_prox: psd blocks go through psd_prox");
    }
    return 0.0;
}

void psd_prox(std::span<const double> g, std::span<const double> xbar, double tau, double lambda,
              std::size_t n, std::size_t d, std::span<double> out, std::uint64_t* eig_counter) {
    if (tau <= 0.0 || lambda <= 0.0 || n == 0)
        throw std::invalid_argument("psd_prox: need tau > 0, lambda > 0, n >= 1");
    if (g.size() != d * d || xbar.size() != d * d || out.size() != d * d)
        throw std::invalid_argument("psd_prox: buffers must have length d*d");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(xbar[i * d + j] - xbar[j * d + i]) > 1e-10)
                throw std::invalid_argument("psd_prox: Xbar not symmetric within 1e-10");

    const double nd = static_cast<double>(n);
    const double denom = lambda + 1.0 / tau;
    std::vector<double> c(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double sym_g = 0.5 * (g[i * d + j] + g[j * d + i]);
            c[i * d + j] = (xbar[i * d + j] / tau - sym_g / nd) / denom;
        }

    std::vector<double> vals(d), vecs(d * d);
    jacobi_eigen_sym(c, d, vals, vecs);
    if (eig_counter) ++*eig_counter;

    // out = V max(D, 0) V^T
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        const double lam = std::max(vals[k], 0.0);
        if (lam == 0.0) continue;
        for (std::size_t i = 0; i < d; ++i) {
            const double vik = vecs[i * d + k] * lam;
            for (std::size_t j = 0; j < d; ++j) out[i * d + j] += vik * vecs[j * d + k];
        }
    }
    // exact symmetry despite accumulation order
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const double s = 0.5 * (out[i * d + j] + out[j * d + i]);
            out[i * d + j] = out[j * d + i] = s;
        }
}

}  // namespace dspdc
