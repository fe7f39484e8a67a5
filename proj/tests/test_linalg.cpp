#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "figmn/errors.hpp"
#include "figmn/linalg.hpp"
#include "oracles.hpp"

using namespace figmn;

TEST_CASE("mahalanobis_sq trivial cases") {
    SymmetricMatrix lam = SymmetricMatrix::identity(2);
    Vector mu = {1.0, -2.0};

    CHECK(mahalanobis_sq(mu, mu, lam) == 0.0);

    Vector x = {1.0 + 3.0, -2.0 + 4.0};
    CHECK(mahalanobis_sq(x, mu, lam) == doctest::Approx(25.0).epsilon(1e-14));

    CHECK_THROWS_AS(mahalanobis_sq(Vector{1.0}, mu, lam), DimensionError);
}

TEST_CASE("mahalanobis_sq matches direct inversion") {
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        SymmetricMatrix c = oracle::random_spd(3, rng);
        oracle::Dense c_inv = oracle::invert(oracle::to_dense(c));
        SymmetricMatrix lam = oracle::to_symmetric(c_inv);
        Vector mu = oracle::random_vector(3, rng);
        Vector x = oracle::random_vector(3, rng);
        Vector e(3);
        for (int i = 0; i < 3; ++i) e[i] = x[i] - mu[i];
        const double want = oracle::quad_form(c_inv, e);
        CHECK(oracle::rel_err(mahalanobis_sq(x, mu, lam), want) < 1e-10);
    }
}

TEST_CASE("rank_one_inverse_add analytic cases") {
    SymmetricMatrix eye = SymmetricMatrix::identity(2);

    Vector zero = {0.0, 0.0};
    SymmetricMatrix same = rank_one_inverse_add(eye, zero);
    CHECK(same(0, 0) == 1.0);
    CHECK(same(1, 1) == 1.0);
    CHECK(same(0, 1) == 0.0);

    Vector e1 = {1.0, 0.0};
    SymmetricMatrix r = rank_one_inverse_add(eye, e1);
    CHECK(r(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("rank_one_inverse_sub analytic cases") {
    Vector diag = {0.5, 1.0};
    SymmetricMatrix a_inv = SymmetricMatrix::from_diagonal(diag);

    Vector zero = {0.0, 0.0};
    SymmetricMatrix same = rank_one_inverse_sub(a_inv, zero);
    CHECK(same(0, 0) == 0.5);

    Vector e1 = {1.0, 0.0};
    SymmetricMatrix r = rank_one_inverse_sub(a_inv, e1);
    CHECK(r(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("rank_one inverse updates match direct inversion") {
    Rng rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        SymmetricMatrix a = oracle::random_spd(5, rng);
        oracle::Dense a_dense = oracle::to_dense(a);
        SymmetricMatrix a_inv = oracle::to_symmetric(oracle::invert(a_dense));
        Vector u = oracle::random_vector(5, rng, 0.5);

        SymmetricMatrix got_add = rank_one_inverse_add(a_inv, u);
        oracle::Dense want_add = oracle::invert(oracle::add_outer(a_dense, u, +1.0));
        CHECK(oracle::max_rel_err(got_add, want_add) < 1e-9);

        // Scale u so the subtraction stays comfortably positive definite.
        Vector w = a_inv.apply(u);
        double q = 0.0;
        for (int i = 0; i < 5; ++i) q += u[i] * w[i];
        const double s = std::sqrt(0.5 / q);
        for (double& v : u) v *= s;

        SymmetricMatrix got_sub = rank_one_inverse_sub(a_inv, u);
        oracle::Dense want_sub = oracle::invert(oracle::add_outer(a_dense, u, -1.0));
        CHECK(oracle::max_rel_err(got_sub, want_sub) < 1e-9);

        CHECK(got_add.symmetry_gap() <= 1e-9 * std::max(got_add.max_abs(), 1.0));
        CHECK(got_sub.symmetry_gap() <= 1e-9 * std::max(got_sub.max_abs(), 1.0));
    }
}

TEST_CASE("rank_one_inverse_sub rejects degenerate updates") {
    SymmetricMatrix a_inv = SymmetricMatrix::identity(2);
    Vector u = {1.0, 0.0};  // u'A^{-1}u = 1 exactly
    CHECK_THROWS_AS(rank_one_inverse_sub(a_inv, u), DegenerateUpdate);
    CHECK_THROWS_AS(det_rank_one_sub(1.0, a_inv, u), DegenerateUpdate);
}

TEST_CASE("determinant lemma analytic cases") {
    SymmetricMatrix eye = SymmetricMatrix::identity(2);
    Vector zero = {0.0, 0.0};
    Vector e1 = {1.0, 0.0};

    CHECK(det_rank_one_add(3.0, eye, zero) == 3.0);
    CHECK(det_rank_one_add(1.0, eye, e1) == doctest::Approx(2.0).epsilon(1e-15));

    SymmetricMatrix a_inv = SymmetricMatrix::from_diagonal(Vector{0.5, 1.0});
    CHECK(det_rank_one_sub(2.0, a_inv, zero) == 2.0);
    CHECK(det_rank_one_sub(2.0, a_inv, e1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("determinant lemma matches LU determinants") {
    Rng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        SymmetricMatrix a = oracle::random_spd(4, rng);
        oracle::Dense a_dense = oracle::to_dense(a);
        const double det_a = oracle::determinant(a_dense);
        SymmetricMatrix a_inv = oracle::to_symmetric(oracle::invert(a_dense));
        Vector u = oracle::random_vector(4, rng, 0.4);

        const double want_add = oracle::determinant(oracle::add_outer(a_dense, u, +1.0));
        CHECK(oracle::rel_err(det_rank_one_add(det_a, a_inv, u), want_add) < 1e-9);

        Vector w = a_inv.apply(u);
        double q = 0.0;
        for (int i = 0; i < 4; ++i) q += u[i] * w[i];
        const double s = std::sqrt(0.5 / q);
        for (double& v : u) v *= s;
        const double want_sub = oracle::determinant(oracle::add_outer(a_dense, u, -1.0));
        CHECK(oracle::rel_err(det_rank_one_sub(det_a, a_inv, u), want_sub) < 1e-9);
    }
}

TEST_CASE("property: add then sub with the same u is an identity") {
    Rng rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + rng.uniform_int(7);
        SymmetricMatrix a = oracle::random_spd(n, rng);
        SymmetricMatrix a_inv = oracle::to_symmetric(oracle::invert(oracle::to_dense(a)));
        const double det_a = oracle::determinant(oracle::to_dense(a));
        Vector u = oracle::random_vector(n, rng, 0.6);

        SymmetricMatrix up = rank_one_inverse_add(a_inv, u);
        SymmetricMatrix back = rank_one_inverse_sub(up, u);
        CHECK(oracle::max_rel_err(back, oracle::to_dense(a_inv)) < 1e-8);

        const double det_up = det_rank_one_add(det_a, a_inv, u);
        const double det_back = det_rank_one_sub(det_up, up, u);
        CHECK(oracle::rel_err(det_back, det_a) < 1e-8);
    }
}

TEST_CASE("property: updated inverse times updated matrix is the identity") {
    Rng rng(505);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + rng.uniform_int(15);
        SymmetricMatrix a = oracle::random_spd(n, rng);
        oracle::Dense a_dense = oracle::to_dense(a);
        SymmetricMatrix a_inv = oracle::to_symmetric(oracle::invert(a_dense));
        Vector u = oracle::random_vector(n, rng, 0.5);

        SymmetricMatrix got = rank_one_inverse_add(a_inv, u);
        oracle::Dense updated = oracle::add_outer(a_dense, u, +1.0);
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += got(i, k) * updated[k][j];
                off = std::max(off, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        CHECK(off < 1e-8);
    }
}

TEST_CASE("solve_small_spd") {
    SymmetricMatrix eye = SymmetricMatrix::identity(3);
    Vector v = {1.0, 2.0, 3.0};
    Vector x = solve_small_spd(eye, v);
    CHECK(x == v);

    SymmetricMatrix two = SymmetricMatrix::from_diagonal(Vector{2.0});
    CHECK(solve_small_spd(two, Vector{4.0})[0] == doctest::Approx(2.0));

    Rng rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        SymmetricMatrix m = oracle::random_spd(3, rng);
        Vector rhs = oracle::random_vector(3, rng);
        Vector sol = solve_small_spd(m, rhs);
        Vector back = m.apply(sol);
        double norm_r = 0.0, norm_b = 0.0;
        for (int i = 0; i < 3; ++i) {
            norm_r += (back[i] - rhs[i]) * (back[i] - rhs[i]);
            norm_b += rhs[i] * rhs[i];
        }
        CHECK(std::sqrt(norm_r) <= 1e-10 * std::sqrt(norm_b));
    }

    SymmetricMatrix singular(2);
    singular(0, 0) = 1.0;
    singular(0, 1) = singular(1, 0) = 1.0;
    singular(1, 1) = 1.0;
    CHECK_THROWS_AS(solve_small_spd(singular, Vector{1.0, 1.0}), SingularMatrix);
}

TEST_CASE("cholesky detects non-PD matrices") {
    SymmetricMatrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    CHECK(!cholesky(m).has_value());

    Rng rng(707);
    SymmetricMatrix spd = oracle::random_spd(6, rng);
    auto f = cholesky(spd);
    REQUIRE(f.has_value());
    CHECK(oracle::rel_err(f->det(), oracle::determinant(oracle::to_dense(spd))) < 1e-10);
}
