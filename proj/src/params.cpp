#include "dspdc/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dspdc/errors.hpp"

namespace dspdc {

namespace {

void check_inputs(std::size_t n, std::size_t p, std::size_t q, std::size_t m, double lambda,
                  double gamma, double Lambda) {
    if (n == 0 || p == 0 || m == 0 || q == 0 || m > n || q > p)
        throw std::invalid_argument("compute_params: need 1 <= m <= n and 1 <= q <= p");
    if (!(lambda > 0.0) || !(gamma > 0.0) || !(Lambda > 0.0))
        throw std::invalid_argument("compute_params: lambda, gamma, Lambda must be positive");
}

}  // namespace

void SolverParams::validate() const {
    if (!(tau > 0.0) || !(sigma > 0.0))
        throw consistency_error("SolverParams: step sizes must be positive");
    const double np = static_cast<double>(n), pp = static_cast<double>(p);
    const double mm = static_cast<double>(m), qq = static_cast<double>(q);

    const double prod = tau * sigma;
    const double prod_target = np * mm * qq / (4.0 * pp * Lambda);
    if (std::abs(prod - prod_target) > 1e-12 * std::abs(prod_target))
        throw consistency_error("SolverParams: tau*sigma != n m q / (4 p Lambda)");

    const double lhs = pp / (2.0 * qq * lambda * tau) + pp / qq;
    const double rhs = np * np / (2.0 * mm * gamma * sigma) + np / mm;
    if (std::abs(lhs - rhs) > 1e-10 * std::max(std::abs(lhs), std::abs(rhs)))
        throw consistency_error("SolverParams: step-size balance relation violated");

    if (!(theta > 0.0) || !(theta < pp / qq))
        throw consistency_error("SolverParams: theta outside (0, p/q)");
}

SolverParams compute_params(std::size_t n, std::size_t p, std::size_t q, std::size_t m,
                            double lambda, double gamma, double Lambda, ThetaMode mode) {
    check_inputs(n, p, q, m, lambda, gamma, Lambda);
    const double nd = static_cast<double>(n), pd = static_cast<double>(p);
    const double md = static_cast<double>(m), qd = static_cast<double>(q);

    const double nm = nd / md, pq = pd / qd;
    const double diff = nm - pq;
    const double npmq = nd * pd / (md * qd);
    // discriminant 4 (np/(mq))^2 Lambda / (n lambda gamma)
    const double disc = 4.0 * npmq * npmq * Lambda / (nd * lambda * gamma);
    const double root = std::sqrt(diff * diff + disc);
    // Cancellation-free denominators: diff + root and -diff + root, the
    // smaller one rewritten through disc / (root + |diff|).
    const double den_tau = diff >= 0.0 ? diff + root : disc / (root - diff);
    const double den_sigma = diff <= 0.0 ? -diff + root : disc / (root + diff);

    SolverParams sp;
    sp.n = n;
    sp.p = p;
    sp.q = q;
    sp.m = m;
    sp.lambda = lambda;
    sp.gamma = gamma;
    sp.Lambda = Lambda;
    sp.mode = mode;
    sp.tau = pd / (qd * lambda * den_tau);
    sp.sigma = nd * nd / (md * gamma * den_sigma);

    const double kappa_term = std::sqrt(Lambda / (lambda * gamma * nd)) * npmq;
    const double mx = std::max(nm, pq);
    if (mode == ThetaMode::distance)
        sp.theta = pq - pq / (kappa_term + mx);
    else
        sp.theta = pq - pq / (2.0 * kappa_term + 2.0 * mx);
    return sp;
}

double distance_rate(std::size_t n, std::size_t p, std::size_t q, std::size_t m, double lambda,
                     double gamma, double Lambda) {
    check_inputs(n, p, q, m, lambda, gamma, Lambda);
    const double nd = static_cast<double>(n), pd = static_cast<double>(p);
    const double md = static_cast<double>(m), qd = static_cast<double>(q);
    const double mx = std::max(pd / qd, nd / md);
    const double kappa_term = std::sqrt(Lambda / (lambda * gamma * nd)) * nd * pd / (md * qd);
    return 1.0 - 1.0 / (mx + kappa_term);
}

double gap_rate(std::size_t n, std::size_t p, std::size_t q, std::size_t m, double lambda,
                double gamma, double Lambda) {
    check_inputs(n, p, q, m, lambda, gamma, Lambda);
    const double nd = static_cast<double>(n), pd = static_cast<double>(p);
    const double md = static_cast<double>(m), qd = static_cast<double>(q);
    const double mx = std::max(pd / qd, nd / md);
    const double kappa_term = std::sqrt(Lambda / (lambda * gamma * nd)) * nd * pd / (md * qd);
    return 1.0 - 1.0 / (2.0 * kappa_term + 2.0 * mx);
}

}  // namespace dspdc
