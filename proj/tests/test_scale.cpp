#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "dspdc/errors.hpp"
#include "dspdc/matrix.hpp"
#include "dspdc/rng.hpp"
#include "dspdc/scale.hpp"

using namespace dspdc;

namespace {

DenseMatrix random_dense(std::size_t r, std::size_t c, Rng& rng) {
    DenseMatrix m(r, c);
    for (auto& v : m.values) v = rng.next_normal();
    return m;
}

}  // namespace

TEST_CASE("spectral norm squared matches the eigensolver oracle") {
    Rng rng(8);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t r = 1 + static_cast<std::size_t>(rng.next_below(6));
        const std::size_t c = 1 + static_cast<std::size_t>(rng.next_below(6));
        const DenseMatrix m = random_dense(r, c, rng);
        const double want = oracle::spectral_sq(m.values, r, c);
        CHECK(spectral_norm_sq(m) == doctest::Approx(want).epsilon(1e-8));
    }
    DenseMatrix diag(3, 3);
    diag.at(0, 0) = 2.0;
    diag.at(1, 1) = -5.0;
    diag.at(2, 2) = 1.0;
    CHECK(spectral_norm_sq(diag) == doctest::Approx(25.0).epsilon(1e-10));
}

TEST_CASE("subset pair counts") {
    CHECK(subset_pair_count(4, 2, 3, 1, 1000) == 18);  // C(4,2) * C(3,1)
    CHECK(subset_pair_count(3, 3, 2, 2, 1000) == 1);
    CHECK(subset_pair_count(30, 15, 10, 5, 100) == 101);  // clamped at cap + 1
}

TEST_CASE("exact scale constant agrees with brute force") {
    Rng rng(71);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(3));
        const std::size_t p = 2 + static_cast<std::size_t>(rng.next_below(3));
        const DenseMatrix a = random_dense(n, p, rng);
        const DataMatrix m = DataMatrix::dense(a);
        const std::size_t mm = 1 + static_cast<std::size_t>(rng.next_below(n));
        const std::size_t q = 1 + static_cast<std::size_t>(rng.next_below(p));
        const double got = scale_constant_exact(m, q, mm);
        const double want = oracle::brute_lambda(
            [&](std::size_t i, std::size_t j) { return a.at(i, j); },
            std::vector<std::size_t>(n, 1), std::vector<std::size_t>(p, 1), q, mm);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("exact scale constant handles block partitions") {
    Rng rng(15);
    const DenseMatrix a = random_dense(5, 6, rng);
    const DataMatrix m = DataMatrix::dense(a);
    const BlockPartition rows({2, 3}), cols({1, 3, 2});
    for (std::size_t mm = 1; mm <= 2; ++mm)
        for (std::size_t q = 1; q <= 3; ++q) {
            const double got = scale_constant_exact(m, rows, cols, q, mm);
            const double want =
                oracle::brute_lambda([&](std::size_t i, std::size_t j) { return a.at(i, j); },
                                     rows.sizes(), cols.sizes(), q, mm);
            CHECK(got == doctest::Approx(want).epsilon(1e-8));
        }
}

TEST_CASE("scale constant chain over subset sizes") {
    // Lambda_{q,m} grows with q and m, Lambda_{p,1} >= Lambda_{1,1}, and the
    // full-row constant is at most p times the single-entry constant.
    Rng rng(29);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(3));
        const std::size_t p = 2 + static_cast<std::size_t>(rng.next_below(3));
        const DataMatrix m = DataMatrix::dense(random_dense(n, p, rng));
        const double l11 = scale_constant_exact(m, 1, 1);
        const double lp1 = scale_constant_exact(m, p, 1);
        CHECK(lp1 >= l11 - 1e-12);
        CHECK(l11 >= lp1 / static_cast<double>(p) - 1e-12);
        double prev = 0.0;
        for (std::size_t q = 1; q <= p; ++q) {
            const double cur = scale_constant_exact(m, q, 1);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
        prev = 0.0;
        for (std::size_t mm = 1; mm <= n; ++mm) {
            const double cur = scale_constant_exact(m, 2, mm);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("heuristic scale constant definition and exact corner") {
    Rng rng(33);
    const DenseMatrix a = random_dense(4, 5, rng);
    const DataMatrix m = DataMatrix::dense(a);
    const double lp1 = max_row_block_norm_sq(m, BlockPartition::all_ones(4));
    double want_lp1 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 5; ++j) s += a.at(i, j) * a.at(i, j);
        want_lp1 = std::max(want_lp1, s);
    }
    CHECK(lp1 == doctest::Approx(want_lp1).epsilon(1e-12));

    for (std::size_t q = 1; q <= 5; ++q)
        for (std::size_t mm = 1; mm <= 4; ++mm) {
            const double h = scale_constant_heuristic(m, q, mm);
            CHECK(h == doctest::Approx(static_cast<double>(mm * q) / 5.0 * lp1).epsilon(1e-12));
        }
    // (q, m) = (p, 1) is exact.
    CHECK(scale_constant_heuristic(m, 5, 1) ==
          doctest::Approx(scale_constant_exact(m, 5, 1)).epsilon(1e-8));
}

TEST_CASE("enumeration cap raises capacity_error") {
    Rng rng(2);
    const DataMatrix m = DataMatrix::dense(random_dense(12, 12, rng));
    CHECK_THROWS_AS(scale_constant_exact(m, 6, 6, 100), capacity_error);
}

TEST_CASE("condition number combines row norm and moduli") {
    Rng rng(3);
    const DataMatrix m = DataMatrix::dense(random_dense(3, 4, rng));
    const BlockPartition rows = BlockPartition::all_ones(3);
    const double lp1 = max_row_block_norm_sq(m, rows);
    CHECK(condition_number(m, rows, 0.5, 0.25) == doctest::Approx(lp1 / 0.125).epsilon(1e-12));
}
