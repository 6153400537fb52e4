#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hgraded/dense.hpp"
#include "hgraded/sparse.hpp"

using namespace hgraded;

TEST_CASE("LU inverse: identity and 2x2 closed form") {
    DenseMatrix id = DenseMatrix::identity(5);
    DenseMatrix inv = LuFactor(id).inverse();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) REQUIRE(inv(i, j) == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-15));

    DenseMatrix m(2, 2);
    m(0, 0) = 2; m(0, 1) = 1; m(1, 0) = 1; m(1, 1) = 2;
    DenseMatrix mi = LuFactor(m).inverse();
    REQUIRE(mi(0, 0) == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
    REQUIRE(mi(0, 1) == Catch::Approx(-1.0 / 3.0).epsilon(1e-14));
    REQUIRE(mi(1, 0) == Catch::Approx(-1.0 / 3.0).epsilon(1e-14));
    REQUIRE(mi(1, 1) == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("LU names the singular pivot") {
    DenseMatrix m(3, 3);
    m(0, 0) = 1.0;
    m(1, 2) = 1.0;  // column 1 identically zero -> pivot failure at index 1
    m(2, 1) = 0.0;
    try {
        LuFactor lu(m);
        FAIL("expected numeric_error");
    } catch (const numeric_error& e) {
        REQUIRE(std::string(e.what()).find("pivot at index 1") != std::string::npos);
    }
}

TEST_CASE("random matrices invert to residual 1e-7") {
    Rng rng(31);
    for (int n : {10, 60, 200}) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.next_real(-1.0, 1.0) + (i == j ? n : 0.0);
        DenseMatrix inv = LuFactor(m).inverse();
        // ||M * inv - I||_inf
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += m(i, k) * inv(k, j);
                worst = std::max(worst, std::fabs(s - (i == j ? 1.0 : 0.0)));
            }
        REQUIRE(worst < 1e-7);
    }
}

TEST_CASE("solve matches inverse application") {
    Rng rng(32);
    const int n = 40;
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.next_real(-1.0, 1.0) + (i == j ? 5.0 : 0.0);
    LuFactor lu(m);
    std::vector<double> b(n), x(n), y(n);
    for (auto& v : b) v = rng.next_real(-1.0, 1.0);
    x = b;
    lu.solve(x);
    DenseMatrix inv = lu.inverse();
    inv.matvec(b.data(), y.data());
    for (int i = 0; i < n; ++i) REQUIRE(x[i] == Catch::Approx(y[i]).margin(1e-10));
}

TEST_CASE("matvec and transposed matvec agree with the dense layout") {
    Rng rng(33);
    DenseMatrix m(3, 4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = rng.next_real(-1.0, 1.0);
    std::vector<double> x{1.0, -2.0, 0.5, 3.0}, y(3), xt{0.7, 0.1, -1.0}, yt(4);
    m.matvec(x.data(), y.data());
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += m(i, j) * x[j];
        REQUIRE(y[i] == Catch::Approx(s).margin(1e-14));
    }
    m.matvec_transposed(xt.data(), yt.data());
    for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += m(i, j) * xt[i];
        REQUIRE(yt[j] == Catch::Approx(s).margin(1e-14));
    }
}

TEST_CASE("sparse round trip and binary inverse export") {
    std::map<std::pair<int, int>, double> entries;
    entries[{0, 0}] = 2.0;
    entries[{0, 1}] = -1.0;
    entries[{1, 0}] = -1.0;
    entries[{1, 1}] = 2.0;
    entries[{2, 2}] = 1.0;
    SparseMatrix a(3, entries);
    REQUIRE(a.nnz() == 5);
    REQUIRE(a.get(0, 1) == -1.0);
    REQUIRE(a.get(2, 0) == 0.0);
    REQUIRE(a.pattern_symmetric());
    REQUIRE(a.sym_defect() == 0.0);

    const std::string mm = "test_matrix.mtx";
    export_matrix_market(a, mm);
    std::ifstream in(mm);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "%%MatrixMarket matrix coordinate real general");
    in.close();
    std::remove(mm.c_str());

    DenseMatrix d = a.to_dense();
    const std::string bin = "test_inverse.bin";
    export_inverse_binary(d, bin);
    DenseMatrix r = import_inverse_binary(bin);
    REQUIRE(r.rows() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(r(i, j) == d(i, j));
    std::remove(bin.c_str());
}
