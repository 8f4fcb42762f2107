#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "dspdc/errors.hpp"
#include "dspdc/instances.hpp"
#include "dspdc/metrics.hpp"
#include "dspdc/scale.hpp"

using namespace dspdc;

TEST_CASE("synthetic generator shapes and labels") {
    const Problem prob = gen_synthetic(30, 12, 0.3, 0.05, 4);
    CHECK(prob.n_rows() == 30);
    CHECK(prob.p_cols() == 12);
    CHECK(prob.dual_part.is_all_ones());
    CHECK(prob.primal_part.is_all_ones());
    std::size_t pos = 0;
    for (const SmoothLoss& l : prob.losses) {
        CHECK(l.kind == SmoothLoss::Kind::smoothed_hinge);
        CHECK(l.gamma == 1.0);
        CHECK(std::abs(l.b) == 1.0);
        pos += l.b == 1.0;
    }
    CHECK(pos > 0);
    CHECK(pos < 30);
    CHECK(prob.reg.kind == Regularizer::Kind::elastic_net);
    CHECK(prob.reg.lambda == 0.05);  // quadratic weight
    CHECK(prob.reg.l1 == 0.3);
    CHECK(prob.provenance.at("generator") == "synthetic");
    CHECK(prob.provenance.at("seed") == 4);

    const Problem again = gen_synthetic(30, 12, 0.3, 0.05, 4);
    CHECK(again.a.materialize().values == prob.a.materialize().values);
    const Problem other = gen_synthetic(30, 12, 0.3, 0.05, 5);
    CHECK(other.a.materialize().values != prob.a.materialize().values);
}

TEST_CASE("lower-bound instance matches its closed form") {
    const LowerBoundInstance lb = gen_lower_bound(4, 9.0);
    CHECK(lb.r == doctest::Approx(0.5).epsilon(1e-15));    // (sqrt(9)-1)/(sqrt(9)+1)
    CHECK(lb.xi == doctest::Approx(1.5).epsilon(1e-15));   // (sqrt(9)+3)/(sqrt(9)+1)
    CHECK(lb.lambda == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(lb.gamma == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(lb.problem.lambda() == lb.lambda);
    CHECK(lb.problem.gamma() == lb.gamma);

    REQUIRE(lb.y_star.size() == 4);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(lb.y_star[j] == doctest::Approx(std::pow(0.5, j + 1)).epsilon(1e-15));
    for (std::size_t j = 0; j < 4; ++j) {  // x* = S y*
        double want = 0.0;
        for (std::size_t k = 0; k < 4; ++k) want += lb.s.at(j, k) * lb.y_star[k];
        CHECK(lb.x_star[j] == doctest::Approx(want).epsilon(1e-15));
    }
    REQUIRE(lb.problem.closed_form.has_value());
    CHECK(lb.problem.closed_form->x == lb.x_star);
    CHECK(lb.problem.closed_form->y == lb.y_star);

    // A = -c S^T for c = n lambda, so A_ij picks up S_ji.
    const double c = 4.0 * lb.lambda;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(lb.problem.a.entry(i, j) == doctest::Approx(-c * lb.s.at(j, i)).epsilon(1e-15));
    CHECK(lb.problem.losses[0].b == -c);
    CHECK(lb.problem.losses[1].b == 0.0);

    CHECK(lb.lambda11_bound == doctest::Approx(16.0 * 64.0 / 8.0).epsilon(1e-15));
    CHECK(scale_constant_exact(lb.problem.a, 1, 1) ==
          doctest::Approx(lb.lambda11_bound).epsilon(1e-12));
}

TEST_CASE("lower-bound optimum satisfies the saddle conditions") {
    for (const auto& [n, q] : {std::pair<std::size_t, double>{4, 9.0},
                               std::pair<std::size_t, double>{8, 4.0},
                               std::pair<std::size_t, double>{16, 2.5}}) {
        const LowerBoundInstance lb = gen_lower_bound(n, q);
        CHECK(stationarity_residual(lb.problem, lb.x_star, lb.y_star) <= 1e-10);
        const auto gap = duality_gap(lb.problem, lb.x_star, lb.y_star);
        REQUIRE(gap.has_value());
        CHECK(std::abs(*gap) <= 1e-12);
    }
    CHECK_THROWS_AS(gen_lower_bound(1, 9.0), std::invalid_argument);
    CHECK_THROWS_AS(gen_lower_bound(4, 1.0), std::invalid_argument);
}

TEST_CASE("matrix-risk generator builds psd block problems") {
    const std::size_t n = 9, p = 3, d = 4;
    const Problem mr = gen_matrix_risk(n, p, d, 0.7, 11);
    CHECK(mr.n_rows() == n);
    CHECK(mr.p_cols() == p * d * d);
    CHECK(mr.dual_part.is_all_ones());
    CHECK(mr.primal_part.blocks() == p);
    for (std::size_t b = 0; b < p; ++b) CHECK(mr.primal_part.size(b) == d * d);
    CHECK(mr.reg.kind == Regularizer::Kind::psd_frobenius);
    CHECK(mr.reg.lambda == 0.7);
    CHECK(mr.reg.dim == d);

    for (std::size_t i = 0; i < n; ++i) {  // label = sign of the summed traces
        double tr = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < d; ++k) tr += mr.a.entry(i, j * d * d + k * d + k);
        CHECK(mr.losses[i].b == (tr > 0.0 ? 1.0 : -1.0));
        CHECK(mr.losses[i].kind == SmoothLoss::Kind::smoothed_hinge);
    }
}

TEST_CASE("feature reduction stores the exact factors") {
    const Problem base = gen_synthetic(12, 8, 1e-3, 1e-2, 6);
    const Problem fact = gen_factorized(base, 3, 13);
    REQUIRE(fact.a.storage() == DataMatrix::Storage::factorized);
    CHECK(fact.a.inner_dim() == 3);
    CHECK(fact.a.rows() == 12);
    CHECK(fact.a.cols() == 8);
    const DenseMatrix& u = fact.a.u_factor();
    const DenseMatrix& vt = fact.a.v_factor_t();

    // U = X V^T entry by entry.
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            double want = 0.0;
            for (std::size_t j = 0; j < 8; ++j) want += base.a.entry(i, j) * vt.at(j, k);
            CHECK(u.at(i, k) == doctest::Approx(want).epsilon(1e-12));
        }
    for (std::size_t i = 0; i < 12; ++i) CHECK(fact.losses[i].b == base.losses[i].b);
    CHECK(fact.provenance.at("generator") == "factorized");
    CHECK(fact.provenance.at("base").at("generator") == "synthetic");
    CHECK_FALSE(fact.closed_form.has_value());
    CHECK_THROWS_AS(gen_factorized(base, 8, 13), std::invalid_argument);

    const Problem again = gen_factorized(base, 3, 13);
    CHECK(again.a.u_factor().values == u.values);
}

TEST_CASE("instance reduction stores the exact factors") {
    const Problem base = gen_synthetic(10, 7, 1e-3, 1e-2, 8);
    const Problem fact = gen_factorized_reduced(base, 4, 17);
    REQUIRE(fact.a.storage() == DataMatrix::Storage::factorized);
    const DenseMatrix& u = fact.a.u_factor();
    const DenseMatrix& vt = fact.a.v_factor_t();

    // V = G X with U = G^T, so vt = X^T U entry by entry.
    for (std::size_t j = 0; j < 7; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
            double want = 0.0;
            for (std::size_t i = 0; i < 10; ++i) want += base.a.entry(i, j) * u.at(i, k);
            CHECK(vt.at(j, k) == doctest::Approx(want).epsilon(1e-12));
        }
    CHECK_THROWS_AS(gen_factorized_reduced(base, 10, 17), std::invalid_argument);
}

TEST_CASE("problems serialize losslessly") {
    std::vector<Problem> probs;
    probs.push_back(gen_synthetic(6, 4, 0.2, 0.1, 21));
    probs.push_back(gen_factorized(probs[0], 2, 22));
    probs.push_back(gen_matrix_risk(5, 2, 2, 1.0, 23));
    probs.push_back(gen_lower_bound(4, 9.0).problem);
    {
        std::vector<Triplet> trips{{0, 0, 1.5}, {1, 2, -2.25}, {2, 1, 0.5}};
        probs.push_back(make_scalar_problem(
            DataMatrix::sparse(3, 3, trips),
            {SmoothLoss::square_scaled(1.0, 0.5), SmoothLoss::square_scaled(-2.0, 1.25),
             SmoothLoss::square_scaled(0.75, 2.0)},
            Regularizer::l2(0.25), {{"generator", "adhoc"}}));
    }

    for (const Problem& p : probs) {
        const Problem q = problem_from_json(problem_to_json(p));
        CHECK(q.a.storage() == p.a.storage());
        REQUIRE(q.n_rows() == p.n_rows());
        REQUIRE(q.p_cols() == p.p_cols());
        for (std::size_t i = 0; i < p.n_rows(); ++i)
            for (std::size_t j = 0; j < p.p_cols(); ++j)
                CHECK(q.a.entry(i, j) == p.a.entry(i, j));  // bit-exact round trip
        for (std::size_t i = 0; i < p.n_rows(); ++i) {
            CHECK(q.losses[i].kind == p.losses[i].kind);
            CHECK(q.losses[i].b == p.losses[i].b);
            CHECK(q.losses[i].gamma == p.losses[i].gamma);
        }
        CHECK(q.reg.kind == p.reg.kind);
        CHECK(q.reg.lambda == p.reg.lambda);
        CHECK(q.reg.l1 == p.reg.l1);
        CHECK(q.reg.dim == p.reg.dim);
        CHECK(q.dual_part.sizes() == p.dual_part.sizes());
        CHECK(q.primal_part.sizes() == p.primal_part.sizes());
        CHECK(q.provenance == p.provenance);
        CHECK(q.closed_form.has_value() == p.closed_form.has_value());
        if (p.closed_form) {
            CHECK(q.closed_form->x == p.closed_form->x);
            CHECK(q.closed_form->y == p.closed_form->y);
        }
        if (p.a.storage() == DataMatrix::Storage::factorized) {
            CHECK(q.a.u_factor().values == p.a.u_factor().values);
            CHECK(q.a.v_factor_t().values == p.a.v_factor_t().values);
        }
    }

    const auto tmp = std::filesystem::temp_directory_path() / "dspdc-problem-roundtrip.json";
    save_problem(probs[0], tmp.string());
    const Problem loaded = load_problem(tmp.string());
    CHECK(loaded.a.materialize().values == probs[0].a.materialize().values);
    std::filesystem::remove(tmp);
}

TEST_CASE("json hashing is stable and order independent") {
    CHECK(json_hash(nlohmann::json::parse(R"({"a":1})")) == 3667370098608730867ULL);
    const auto a = nlohmann::json::parse(R"({"x":1,"y":[2,3]})");
    const auto b = nlohmann::json::parse(R"({"y":[2,3],"x":1})");
    CHECK(json_hash(a) == json_hash(b));
    CHECK(json_hash(a) != json_hash(nlohmann::json::parse(R"({"x":1,"y":[2,4]})")));
}

TEST_CASE("libsvm parsing round-trips") {
    std::istringstream in(
        "1 1:0.5 3:-2\n"
        "-1 2:1000\n"
        "# a comment line\n"
        "\n"
        "1 1:4.25\n");
    const LibsvmData data = parse_libsvm(in);
    CHECK(data.matrix.storage() == DataMatrix::Storage::sparse);
    CHECK(data.matrix.rows() == 3);
    CHECK(data.matrix.cols() == 3);
    CHECK(data.labels == std::vector<double>{1.0, -1.0, 1.0});
    CHECK(data.matrix.entry(0, 0) == 0.5);
    CHECK(data.matrix.entry(0, 2) == -2.0);
    CHECK(data.matrix.entry(1, 1) == 1000.0);
    CHECK(data.matrix.entry(2, 0) == 4.25);
    CHECK(data.matrix.nnz() == 4);

    std::ostringstream out;
    write_libsvm(out, data.matrix, data.labels);
    std::istringstream back(out.str());
    const LibsvmData again = parse_libsvm(back);
    CHECK(again.labels == data.labels);
    REQUIRE(again.matrix.rows() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(again.matrix.entry(i, j) == data.matrix.entry(i, j));
}

TEST_CASE("libsvm parser reports the offending line") {
    auto expect_error = [](const char* text, const char* needle) {
        std::istringstream in(text);
        try {
            parse_libsvm(in);
            FAIL_CHECK("expected parse_error for: " << text);
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("1 2:1 2:3\n", "line 1");
    expect_error("1 1:1\n-1 3:2 1:9\n", "line 2");
    expect_error("1 0:1\n", "line 1");
    expect_error("1 a:b\n", "line 1");
    expect_error("1 5\n", "line 1");
    expect_error("\n# only comments\n", "no rows");
}
