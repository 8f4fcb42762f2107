#include "dspdc/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dspdc/errors.hpp"

namespace dspdc {

namespace {

double off_diag_frobenius_sq(const std::vector<double>& a, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) s += 2.0 * a[i * d + j] * a[i * d + j];
    return s;
}

}  // namespace

void jacobi_eigen_sym(std::span<const double> m, std::size_t d, std::span<double> eigvals,
                      std::span<double> eigvecs, double off_diag_tol, std::size_t max_sweeps) {
    if (m.size() != d * d || eigvals.size() != d || eigvecs.size() != d * d)
        throw std::invalid_argument("jacobi_eigen_sym: buffer sizes do not match dimension");
    std::vector<double> a(m.begin(), m.end());
    // symmetrize defensively against representation noise
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const double s = 0.5 * (a[i * d + j] + a[j * d + i]);
            a[i * d + j] = a[j * d + i] = s;
        }
    std::fill(eigvecs.begin(), eigvecs.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) eigvecs[i * d + i] = 1.0;

    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double stop = off_diag_tol * std::max(1.0, scale);

    bool converged = d <= 1 || std::sqrt(off_diag_frobenius_sq(a, d)) <= stop;
    for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a[p * d + q];
                if (apq == 0.0) continue;
                const double app = a[p * d + p], aqq = a[q * d + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // rows/cols p and q of A
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a[k * d + p], akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a[p * d + k], aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = eigvecs[k * d + p], vkq = eigvecs[k * d + q];
                    eigvecs[k * d + p] = c * vkp - s * vkq;
                    eigvecs[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
        converged = std::sqrt(off_diag_frobenius_sq(a, d)) <= stop;
    }
    if (!converged)
        throw numerical_error("jacobi_eigen_sym: off-diagonal norm above tolerance after " +
                              std::to_string(max_sweeps) + " sweeps");
    for (std::size_t i = 0; i < d; ++i) eigvals[i] = a[i * d + i];
}

double min_eigenvalue_sym(std::span<const double> m, std::size_t d) {
    std::vector<double> vals(d), vecs(d * d);
    jacobi_eigen_sym(m, d, vals, vecs);
    double mn = vals.empty() ? 0.0 : vals[0];
    for (double v : vals) mn = std::min(mn, v);
    return mn;
}

}  // namespace dspdc
