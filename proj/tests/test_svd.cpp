#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hgraded/svd.hpp"
#include "oracles.hpp"

using namespace hgraded;

TEST_CASE("rank-1 outer product: truncation at r=1 is exact") {
    Rng rng(51);
    const int m = 8, n = 5;
    std::vector<double> a(m), b(n);
    for (auto& v : a) v = rng.next_real(-1.0, 1.0);
    for (auto& v : b) v = rng.next_real(-1.0, 1.0);
    DenseMatrix mat(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) mat(i, j) = a[i] * b[j];
    LowRankFactor f = truncated_svd(mat, 1);
    REQUIRE(f.rank() == 1);
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) worst = std::max(worst, std::fabs(f.x(i, 0) * f.y(j, 0) - mat(i, j)));
    REQUIRE(worst < 1e-13);
}

TEST_CASE("random 5x4 at r=2: residual norm equals sigma_3 from the eigen-route oracle") {
    Rng rng(52);
    DenseMatrix m = oracles::random_matrix(5, 4, rng);
    LowRankFactor f = truncated_svd(m, 2);
    auto sv = oracles::singular_values(m);
    // residual via the oracle route as well
    DenseMatrix res(5, 4);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int c = 0; c < f.rank(); ++c) s += f.x(i, c) * f.y(j, c);
            res(i, j) = m(i, j) - s;
        }
    double res_norm = oracles::singular_values(res)[0];
    REQUIRE(res_norm == Catch::Approx(sv[2]).epsilon(1e-12));
}

TEST_CASE("r >= min(m,n) reconstructs exactly") {
    Rng rng(53);
    DenseMatrix m = oracles::random_matrix(6, 9, rng);
    LowRankFactor f = truncated_svd(m, 9);
    REQUIRE(f.rank() == 6);
    double worst = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 9; ++j) {
            double s = 0.0;
            for (int c = 0; c < f.rank(); ++c) s += f.x(i, c) * f.y(j, c);
            worst = std::max(worst, std::fabs(s - m(i, j)));
        }
    REQUIRE(worst < 1e-12);
}

TEST_CASE("Eckart-Young on 100 random matrices up to 50x50") {
    Rng rng(54);
    for (int trial = 0; trial < 100; ++trial) {
        int rows = 2 + int(rng.next_index(49));
        int cols = 2 + int(rng.next_index(49));
        DenseMatrix m = oracles::random_matrix(rows, cols, rng);
        int k = std::min(rows, cols);
        int r = 1 + int(rng.next_index(k));
        LowRankFactor f = truncated_svd(m, r);
        DenseMatrix res(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                double s = 0.0;
                for (int c = 0; c < f.rank(); ++c) s += f.x(i, c) * f.y(j, c);
                res(i, j) = m(i, j) - s;
            }
        auto sv = oracles::singular_values(m);
        double sigma_r1 = r < k ? sv[r] : 0.0;
        double res_norm = oracles::singular_values(res)[0];
        REQUIRE(std::fabs(res_norm - sigma_r1) <= 1e-10 * std::max(1e-30, sv[0]));
    }
}

TEST_CASE("singular values match the oracle and factors are orthogonal") {
    Rng rng(55);
    for (auto [rows, cols] : {std::pair{12, 7}, std::pair{7, 12}, std::pair{10, 10}}) {
        DenseMatrix m = oracles::random_matrix(rows, cols, rng);
        SvdResult s = svd_onesided(m);
        auto sv = oracles::singular_values(m);
        REQUIRE(int(s.sigma.size()) == std::min(rows, cols));
        for (std::size_t i = 0; i < s.sigma.size(); ++i)
            REQUIRE(s.sigma[i] == Catch::Approx(sv[i]).margin(1e-12));
        // V orthonormal columns
        for (int i = 0; i < s.v.cols(); ++i)
            for (int j = 0; j <= i; ++j) {
                double d = 0.0;
                for (int k = 0; k < s.v.rows(); ++k) d += s.v(k, i) * s.v(k, j);
                REQUIRE(d == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-12));
            }
        // reconstruction
        double worst = 0.0;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                double v = 0.0;
                for (std::size_t c = 0; c < s.sigma.size(); ++c)
                    v += s.u(i, int(c)) * s.sigma[c] * s.v(j, int(c));
                worst = std::max(worst, std::fabs(v - m(i, j)));
            }
        REQUIRE(worst < 1e-12);
    }
}

TEST_CASE("svd rejects empty input and r < 1") {
    DenseMatrix empty;
    REQUIRE_THROWS_AS(svd_onesided(empty), numeric_error);
    DenseMatrix one(2, 2);
    one(0, 0) = 1.0;
    REQUIRE_THROWS_AS(truncated_svd(one, 0), config_error);
}
