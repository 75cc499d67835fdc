#include "cfrac/baseline.hpp"
#include "cfrac/error.hpp"
#include "cfrac/srg.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace cfrac;
using namespace cfrac::baseline;
using Catch::Approx;

TEST_CASE("tridiagonal matrix layout", "[baseline]") {
    const Matrix two = tridiag_matrix(2);
    CHECK(two.data == std::vector<double>{-2, 1, 0, 0});
    const Matrix three = tridiag_matrix(3);
    CHECK(three.data == std::vector<double>{-2, 1, 0, 1, -2, 1, 0, 0, 0});
    const Matrix m = tridiag_matrix(9);
    for (std::size_t i = 1; i + 1 < m.n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) row += m(i, j);
        CHECK(row == 0.0);
    }
    for (std::size_t j = 0; j < m.n; ++j) CHECK(m(m.n - 1, j) == 0.0);
    CHECK_THROWS_AS(tridiag_matrix(1), Error);
    CHECK_THROWS_AS(spectral_quantity(1), Error);
}

TEST_CASE("spectral quantity examples", "[baseline]") {
    CHECK(spectral_quantity(2) == Approx(2.0).margin(1e-15));
    // 2x2 leading block of n=3 is [[-2,1],[1,-2]]: eigenvalues -1, -3.
    CHECK(spectral_quantity(3) == Approx(3.0).epsilon(1e-15));
    CHECK(spectral_quantity(10) == Approx(3.9021130325903).epsilon(1e-12));
    CHECK(std::abs(spectral_quantity(800) - 4.0) < 0.01);
}

TEST_CASE("closed form agrees with power iteration", "[baseline][property]") {
    for (int n = 2; n <= 200; ++n) {
        const double numeric = power_iteration(tridiag_matrix(n));
        INFO("n = " << n);
        CHECK(std::abs(numeric - spectral_quantity(n)) <= 1e-8);
    }
}

TEST_CASE("power iteration on small matrices", "[baseline]") {
    Matrix d{2, {3.0, 0.0, 0.0, -1.0}};
    CHECK(power_iteration(d) == Approx(3.0).epsilon(1e-12));
    Matrix z{2, {0.0, 0.0, 0.0, 0.0}};
    CHECK(power_iteration(z) == 0.0);
    CHECK_THROWS_AS(power_iteration(Matrix{}), Error);
}

TEST_CASE("baseline bound examples", "[baseline]") {
    const BaselineBound b = besselink_bound(10, 3, 2.0);
    CHECK(b.l == Approx(3.9021130325903).epsilon(1e-12));
    CHECK(b.gamma == Approx(2.0 * b.l));
    CHECK(b.bound == Approx(7.0 / ((1.0 - b.gamma) * (1.0 - b.gamma))));
    CHECK(b.bound == Approx(0.1512).epsilon(1e-3));
    CHECK_FALSE(b.infinite);

    // gamma = 1 exactly: l(2) = 2 with lambda = 1/2.
    const BaselineBound inf = besselink_bound(2, 0, 0.5);
    CHECK(inf.infinite);
    CHECK(std::isinf(inf.bound));

    CHECK_THROWS_AS(besselink_bound(3, 3, 2.0), Error);
    CHECK_THROWS_AS(besselink_bound(5, -1, 2.0), Error);
}

TEST_CASE("spectral quantity and bound grow with n", "[baseline][property]") {
    double prev_l = 0.0, prev_b = 0.0;
    for (int n = 4; n <= 800; ++n) {
        const BaselineBound b = besselink_bound(n, 3, 2.0);
        CHECK(b.l > prev_l);
        CHECK(b.bound > prev_b);
        CHECK(b.bound >= 0.0);
        prev_l = b.l;
        prev_b = b.bound;
    }
}

TEST_CASE("baseline crosses the lambda_n bound near n = 39", "[baseline]") {
    const auto s = srg::lambda_chain(2.0, 100);
    int crossing = 0;
    for (int n = 4; n <= 100; ++n) {
        if (besselink_bound(n, 3, 2.0).bound > s.values[static_cast<std::size_t>(n - 1)]) {
            crossing = n;
            break;
        }
    }
    CHECK(crossing >= 37);
    CHECK(crossing <= 41);
}
