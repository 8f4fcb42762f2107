#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "dspdc/errors.hpp"
#include "dspdc/prox.hpp"
#include "dspdc/rng.hpp"

using namespace dspdc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Loss value recomputed from its definition in long double.
long double phi_ld(const SmoothLoss& l, long double z) {
    switch (l.kind) {
        case SmoothLoss::Kind::square: {
            const long double r = z - static_cast<long double>(l.b);
            return r * r / (2.0L * static_cast<long double>(l.gamma));
        }
        case SmoothLoss::Kind::logistic: {
            const long double t = static_cast<long double>(l.b) * z;
            return t >= 0.0L ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
        }
        case SmoothLoss::Kind::smoothed_hinge: {
            const long double t = static_cast<long double>(l.b) * z;
            if (t >= 1.0L) return 0.0L;
            if (t <= 0.0L) return 0.5L - t;
            return 0.5L * (1.0L - t) * (1.0L - t);
        }
    }
    return 0.0L;
}

void check_close(double got, long double want, double tol) {
    CHECK(std::abs(got - static_cast<double>(want)) <=
          tol * (1.0 + std::abs(static_cast<double>(want))));
}

// Conjugate domain as a closed bracket for golden search; classification
// losses live on b*beta in [-1, 0], the square family is unrestricted.
void conjugate_bracket(const SmoothLoss& l, long double& lo, long double& hi) {
    if (l.kind == SmoothLoss::Kind::square) {
        lo = -60.0L;
        hi = 60.0L;
    } else {
        lo = std::min(0.0L, static_cast<long double>(-l.b));
        hi = std::max(0.0L, static_cast<long double>(-l.b));
    }
}

SmoothLoss random_loss(SmoothLoss::Kind kind, Rng& rng) {
    const double b = rng.next_below(2) == 0 ? 1.0 : -1.0;
    switch (kind) {
        case SmoothLoss::Kind::square:
            return SmoothLoss::square_scaled(4.0 * rng.next_uniform() - 2.0,
                                             0.1 + 3.9 * rng.next_uniform());
        case SmoothLoss::Kind::logistic: return SmoothLoss::logistic(b);
        case SmoothLoss::Kind::smoothed_hinge: return SmoothLoss::smoothed_hinge(b);
    }
    return SmoothLoss::square(0.0);
}

}  // namespace

TEST_CASE("loss factories fix the conjugate moduli") {
    CHECK(SmoothLoss::square(1.0).gamma == 0.5);
    CHECK(SmoothLoss::logistic(-1.0).gamma == 4.0);
    CHECK(SmoothLoss::smoothed_hinge(1.0).gamma == 1.0);
    CHECK(SmoothLoss::square_scaled(-0.5, 2.0).gamma == 2.0);
    CHECK_THROWS_AS(SmoothLoss::square_scaled(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("loss gradients match finite differences") {
    Rng rng(41);
    for (auto kind : {SmoothLoss::Kind::square, SmoothLoss::Kind::logistic,
                      SmoothLoss::Kind::smoothed_hinge}) {
        for (int rep = 0; rep < 300; ++rep) {
            const SmoothLoss l = random_loss(kind, rng);
            const long double z = 8.0L * rng.next_uniform() - 4.0L;
            const long double h = 1e-6L;
            const long double fd = (phi_ld(l, z + h) - phi_ld(l, z - h)) / (2.0L * h);
            check_close(l.grad(static_cast<double>(z)), fd, 1e-5);
            check_close(l.value(static_cast<double>(z)), phi_ld(l, z), 1e-12);
        }
    }
}

TEST_CASE("conjugates match the numeric supremum") {
    Rng rng(42);
    for (auto kind : {SmoothLoss::Kind::square, SmoothLoss::Kind::logistic,
                      SmoothLoss::Kind::smoothed_hinge}) {
        for (int rep = 0; rep < 200; ++rep) {
            const SmoothLoss l = random_loss(kind, rng);
            long double lo, hi;
            conjugate_bracket(l, lo, hi);
            // Sample strictly inside the domain; the boundary supremum of the
            // classification losses is attained only in the limit.
            const long double t = 0.02L + 0.96L * rng.next_uniform();
            const long double beta =
                kind == SmoothLoss::Kind::square ? -5.0L + 10.0L * rng.next_uniform()
                                                 : lo + t * (hi - lo);
            const long double want =
                oracle::numeric_conjugate([&](long double z) { return phi_ld(l, z); }, beta,
                                          -200.0L, 200.0L);
            check_close(l.conjugate(static_cast<double>(beta)), want, 1e-8);
        }
    }
}

TEST_CASE("Fenchel-Young equality along the gradient") {
    Rng rng(43);
    for (auto kind : {SmoothLoss::Kind::square, SmoothLoss::Kind::logistic,
                      SmoothLoss::Kind::smoothed_hinge}) {
        for (int rep = 0; rep < 300; ++rep) {
            const SmoothLoss l = random_loss(kind, rng);
            const double z = 8.0 * rng.next_uniform() - 4.0;
            const double beta = l.grad(z);
            REQUIRE(l.conjugate_feasible(beta));
            CHECK(std::abs(l.value(z) + l.conjugate(beta) - z * beta) <= 1e-10);
        }
    }
}

TEST_CASE("conjugate domain boundaries") {
    const SmoothLoss hinge = SmoothLoss::smoothed_hinge(1.0);
    CHECK(hinge.conjugate_feasible(-1.0));
    CHECK(hinge.conjugate_feasible(0.0));
    CHECK_FALSE(hinge.conjugate_feasible(0.1));
    CHECK(hinge.conjugate(-1.5) == kInf);
    const SmoothLoss logi = SmoothLoss::logistic(-1.0);
    CHECK(logi.conjugate_feasible(1.0));
    CHECK_FALSE(logi.conjugate_feasible(-0.1));
    CHECK(logi.conjugate(0.0) == 0.0);   // boundary limits are finite
    CHECK(logi.conjugate(1.0) == 0.0);
    CHECK(SmoothLoss::square(2.0).conjugate_feasible(1e9));
}

TEST_CASE("dual prox maximizes its objective") {
    Rng rng(44);
    for (auto kind : {SmoothLoss::Kind::square, SmoothLoss::Kind::logistic,
                      SmoothLoss::Kind::smoothed_hinge}) {
        for (int rep = 0; rep < 1000; ++rep) {
            const SmoothLoss l = random_loss(kind, rng);
            const double u = 10.0 * rng.next_uniform() - 5.0;
            const double y = 6.0 * rng.next_uniform() - 3.0;
            const double sigma = 0.05 + 4.95 * rng.next_uniform();
            const std::size_t n = 1 + static_cast<std::size_t>(rng.next_below(50));
            const double got = dual_prox(l, u, y, sigma, n);
            CHECK(l.conjugate_feasible(got));

            long double lo, hi;
            conjugate_bracket(l, lo, hi);
            const auto obj = [&](long double beta) {
                const long double cj = l.conjugate(static_cast<double>(beta));
                return (u * beta - cj) / static_cast<long double>(n) -
                       (beta - y) * (beta - y) / (2.0L * sigma);
            };
            const long double want = oracle::golden_max(obj, lo, hi);
            check_close(got, want, 1e-8);
        }
    }
}

TEST_CASE("dual prox pinned value") {
    // square loss b = 1, gamma = 1/2, u = 0.7, y = -0.3, sigma = 1.3, n = 5
    CHECK(dual_prox(SmoothLoss::square(1.0), 0.7, -0.3, 1.3, 5) ==
          doctest::Approx(-0.33451327433628325).epsilon(1e-15));
    CHECK_THROWS_AS(dual_prox(SmoothLoss::square(1.0), 0.0, 0.0, 0.0, 5), std::invalid_argument);
}

TEST_CASE("regularizer factories validate inputs") {
    CHECK_THROWS_AS(Regularizer::l2(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Regularizer::elastic_net(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(Regularizer::elastic_net(0.1, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(Regularizer::psd_frobenius(1.0, 0), std::invalid_argument);
    CHECK(Regularizer::elastic_net(0.3, 0.2).lambda == 0.3);
    CHECK(Regularizer::elastic_net(0.3, 0.2).l1 == 0.2);
    CHECK(Regularizer::psd_frobenius(1.0, 3).block_len() == 9);
    CHECK_FALSE(Regularizer::psd_frobenius(1.0, 3).has_conjugate());
}

TEST_CASE("regularizer conjugates match the numeric supremum") {
    Rng rng(45);
    const Regularizer l2 = Regularizer::l2(0.35);
    const Regularizer en = Regularizer::elastic_net(0.4, 0.25);
    for (const Regularizer* reg : {&l2, &en}) {
        for (int rep = 0; rep < 200; ++rep) {
            const long double u = 6.0L * rng.next_uniform() - 3.0L;
            const long double want = oracle::numeric_conjugate(
                [&](long double a) {
                    return static_cast<long double>(reg->value_scalar(static_cast<double>(a)));
                },
                u, -100.0L, 100.0L);
            check_close(reg->conjugate_scalar(static_cast<double>(u)), want, 1e-8);

            // gradient of the conjugate: finite differences + Fenchel equality
            const double ud = static_cast<double>(u);
            const double a = reg->grad_conjugate_scalar(ud);
            const double fd =
                (reg->conjugate_scalar(ud + 1e-6) - reg->conjugate_scalar(ud - 1e-6)) / 2e-6;
            CHECK(std::abs(a - fd) <= 1e-5 * (1.0 + std::abs(fd)));
            CHECK(std::abs(reg->conjugate_scalar(ud) - (a * ud - reg->value_scalar(a))) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(Regularizer::psd_frobenius(1.0, 2).conjugate_scalar(0.5),
                    unsupported_operation);
}

TEST_CASE("primal prox minimizes its objective") {
    Rng rng(46);
    const Regularizer l2 = Regularizer::l2(0.35);
    const Regularizer en = Regularizer::elastic_net(0.4, 0.25);
    for (const Regularizer* reg : {&l2, &en}) {
        for (int rep = 0; rep < 1000; ++rep) {
            const double v = 10.0 * rng.next_uniform() - 5.0;
            const double xbar = 6.0 * rng.next_uniform() - 3.0;
            const double tau = 0.05 + 4.95 * rng.next_uniform();
            const std::size_t n = 1 + static_cast<std::size_t>(rng.next_below(50));
            const double got = primal_prox(*reg, v, xbar, tau, n);
            const auto obj = [&](long double a) {
                return (v * a) / static_cast<long double>(n) +
                       static_cast<long double>(reg->value_scalar(static_cast<double>(a))) +
                       (a - xbar) * (a - xbar) / (2.0L * tau);
            };
            const long double want = oracle::golden_min(obj, -60.0L, 60.0L);
            check_close(got, want, 1e-8);
        }
    }
}

TEST_CASE("primal prox pinned values") {
    // l2 lambda = 0.25: v = -0.9, xbar = 0.4, tau = 0.8, n = 3
    CHECK(primal_prox(Regularizer::l2(0.25), -0.9, 0.4, 0.8, 3) ==
          doctest::Approx(0.53333333333333333).epsilon(1e-15));
    // elastic net lambda2 = 0.25, lambda1 = 0.15, same arguments
    CHECK(primal_prox(Regularizer::elastic_net(0.25, 0.15), -0.9, 0.4, 0.8, 3) ==
          doctest::Approx(0.43333333333333335).epsilon(1e-15));
    // soft threshold pins the coordinate at zero
    CHECK(primal_prox(Regularizer::elastic_net(0.25, 0.5), 0.3, 0.02, 0.5, 1) == 0.0);
    CHECK_THROWS_AS(primal_prox(Regularizer::l2(0.25), 0.0, 0.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("psd prox satisfies the cone optimality conditions") {
    Rng rng(47);
    for (const std::size_t d : {std::size_t{3}, std::size_t{5}}) {
        for (int rep = 0; rep < 25; ++rep) {
            const std::size_t dd = d * d;
            std::vector<double> g(dd), xbar(dd, 0.0), out(dd);
            for (auto& v : g) v = 2.0 * rng.next_uniform() - 1.0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i; j < d; ++j) {
                    const double v = 2.0 * rng.next_uniform() - 1.0;
                    xbar[i * d + j] = xbar[j * d + i] = v;
                }
            const double tau = 0.1 + 2.0 * rng.next_uniform();
            const double lambda = 0.1 + rng.next_uniform();
            const std::size_t n = 1 + static_cast<std::size_t>(rng.next_below(20));
            std::uint64_t eigs = 0;
            psd_prox(g, xbar, tau, lambda, n, d, out, &eigs);
            CHECK(eigs == 1);

            // KKT for min <G,X>/n + lambda/2 ||X||^2 + ||X - Xbar||^2/(2 tau)
            // over the PSD cone: X psd, S = grad psd, <S, X> = 0.
            std::vector<double> s(dd);
            double inner = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    const double sym_g = 0.5 * (g[i * d + j] + g[j * d + i]);
                    s[i * d + j] = sym_g / static_cast<double>(n) + lambda * out[i * d + j] +
                                   (out[i * d + j] - xbar[i * d + j]) / tau;
                    inner += s[i * d + j] * out[i * d + j];
                }
            CHECK(oracle::min_eig_sym(out, d) >= -1e-10);
            CHECK(oracle::min_eig_sym(s, d) >= -1e-8);
            CHECK(std::abs(inner) <= 1e-8);

            // independent projection through the test-local eigensolver
            std::vector<double> c(dd), w, vv, want(dd, 0.0);
            const double denom = lambda + 1.0 / tau;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    c[i * d + j] = (xbar[i * d + j] / tau -
                                    0.5 * (g[i * d + j] + g[j * d + i]) / static_cast<double>(n)) /
                                   denom;
            oracle::jacobi_eig(c, d, w, vv);
            for (std::size_t k = 0; k < d; ++k) {
                const double lam = std::max(w[k], 0.0);
                if (lam == 0.0) continue;
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < d; ++j)
                        want[i * d + j] += lam * vv[i * d + k] * vv[j * d + k];
            }
            for (std::size_t k = 0; k < dd; ++k)
                CHECK(out[k] == doctest::Approx(want[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("psd prox validates its inputs") {
    std::vector<double> g(4, 0.0), xbar(4, 0.0), out(4);
    xbar[1] = 0.5;  // asymmetric
    CHECK_THROWS_AS(psd_prox(g, xbar, 1.0, 1.0, 1, 2, out), std::invalid_argument);
    xbar[1] = 0.0;
    CHECK_THROWS_AS(psd_prox(g, xbar, 0.0, 1.0, 1, 2, out), std::invalid_argument);
    std::vector<double> small(3);
    CHECK_THROWS_AS(psd_prox(small, xbar, 1.0, 1.0, 1, 2, out), std::invalid_argument);
}

TEST_CASE("psd block value distinguishes the cone") {
    const Regularizer reg = Regularizer::psd_frobenius(0.8, 2);
    const std::vector<double> inside{2.0, 0.5, 0.5, 1.0};   // eigs > 0
    const std::vector<double> outside{1.0, 2.0, 2.0, 1.0};  // eig -1
    CHECK(reg.block_value(inside) ==
          doctest::Approx(0.4 * (4.0 + 0.25 + 0.25 + 1.0)).epsilon(1e-12));
    CHECK(reg.block_value(outside) == kInf);
    CHECK_THROWS_AS(reg.block_value(std::vector<double>(3, 0.0)), std::invalid_argument);
}
