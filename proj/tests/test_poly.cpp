#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hgraded/quadrature.hpp"
#include "hgraded/simplex_poly.hpp"
#include "hgraded/subsimplex.hpp"

using namespace hgraded;

namespace {

SimplexPoly random_poly(int dim, int deg, Rng& rng) {
    SimplexPoly f(dim, deg);
    const auto& b = f.basis();
    for (int i = 0; i < b.size(); ++i) f.set(b.list[i], rng.next_real(-1.0, 1.0));
    return f;
}

// Monte-Carlo integral over T^d, uniform sampling via exponential spacings.
// Returns (mean, standard error).
std::pair<double, double> mc_integral(const SimplexPoly& f, int n, Rng& rng) {
    const int d = f.dim();
    const double vol = 1.0 / factorial(d);
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> e(d + 1), x(d);
    for (int it = 0; it < n; ++it) {
        double tot = 0.0;
        for (auto& v : e) {
            v = -std::log(1.0 - rng.next_unit());
            tot += v;
        }
        for (int i = 0; i < d; ++i) x[i] = e[i] / tot;
        double val = f.eval(x);
        sum += val;
        sumsq += val * val;
    }
    double mean = sum / n;
    double var = std::max(0.0, sumsq / n - mean * mean);
    return {vol * mean, vol * std::sqrt(var / n)};
}

}  // namespace

TEST_CASE("monomial basis enumeration and ranking") {
    const auto& b = monomial_basis(2, 3);
    REQUIRE(b.size() == 10);
    for (int i = 0; i < b.size(); ++i) REQUIRE(b.rank(b.list[i]) == i);
    REQUIRE(monomial_basis(3, 8).size() == binom_int(11, 3));
    REQUIRE(monomial_basis(0, 5).size() == 1);
}

TEST_CASE("polynomial arithmetic round trips through evaluation") {
    Rng rng(11);
    for (int d = 1; d <= 3; ++d) {
        SimplexPoly f = random_poly(d, 3, rng);
        SimplexPoly g = random_poly(d, 2, rng);
        SimplexPoly h = f * g;
        for (int it = 0; it < 20; ++it) {
            std::vector<double> x(d);
            double rem = 1.0;
            for (int i = 0; i < d; ++i) {
                x[i] = rng.next_real(0.0, rem);
                rem -= x[i];
            }
            REQUIRE(h.eval(x) == Catch::Approx(f.eval(x) * g.eval(x)).margin(1e-12));
            REQUIRE((f + g).eval(x) == Catch::Approx(f.eval(x) + g.eval(x)).margin(1e-12));
        }
    }
}

TEST_CASE("derivative matches finite differences") {
    Rng rng(12);
    SimplexPoly f = random_poly(2, 4, rng);
    auto fx = f.derivative(0);
    std::vector<double> x{0.31, 0.22};
    double h = 1e-6;
    double fd = (f.eval({x[0] + h, x[1]}) - f.eval({x[0] - h, x[1]})) / (2 * h);
    REQUIRE(fx.eval(x) == Catch::Approx(fd).epsilon(1e-7));
}

TEST_CASE("exact monomial integrals over the reference simplex") {
    // d=1: int_0^1 x^a = 1/(a+1)
    for (int a = 0; a <= 6; ++a)
        REQUIRE(simplex_monomial_integral({a}, 1) == Catch::Approx(1.0 / (a + 1)).epsilon(1e-14));
    // d=2 spot values
    REQUIRE(simplex_monomial_integral({0, 0}, 2) == Catch::Approx(0.5).epsilon(1e-15));
    REQUIRE(simplex_monomial_integral({1, 0}, 2) == Catch::Approx(1.0 / 6.0).epsilon(1e-15));
    REQUIRE(simplex_monomial_integral({1, 1}, 2) == Catch::Approx(1.0 / 24.0).epsilon(1e-15));
}

TEST_CASE("compose with affine change of variables preserves values") {
    Rng rng(13);
    SimplexPoly f = random_poly(2, 3, rng);
    // substitute x = (t1+t2)/2, y = t2/3 - 0.1
    auto gx = SimplexPoly::affine(2, 0.0, {0.5, 0.5});
    auto gy = SimplexPoly::affine(2, -0.1, {0.0, 1.0 / 3.0});
    SimplexPoly c = f.compose({gx, gy});
    for (int it = 0; it < 10; ++it) {
        double t1 = rng.next_real(0.0, 0.5), t2 = rng.next_real(0.0, 0.5);
        REQUIRE(c.eval({t1, t2}) ==
                Catch::Approx(f.eval({(t1 + t2) / 2, t2 / 3 - 0.1})).margin(1e-12));
    }
}

TEST_CASE("Grundmann-Moeller rules are exact to their stated degree") {
    for (int d = 1; d <= 3; ++d) {
        for (int s = 0; s <= 5; ++s) {
            QuadRule rule = grundmann_moeller(d, s);
            const auto& basis = monomial_basis(d, rule.degree);
            for (const MultiIndex& q : basis.list) {
                SimplexPoly m(d, rule.degree);
                m.set(q, 1.0);
                double exact = simplex_monomial_integral(q, d);
                REQUIRE(integrate(rule, m) == Catch::Approx(exact).margin(1e-13));
            }
        }
    }
}

TEST_CASE("quadrature norm trivial values") {
    // f = 1 on T^2 -> sqrt(1/2)
    SimplexPoly one = SimplexPoly::constant(2, 1.0);
    QuadRule r2 = simplex_rule(2, 2);
    REQUIRE(std::sqrt(integrate(r2, one * one)) == Catch::Approx(std::sqrt(0.5)).epsilon(1e-14));
    // f = x on [0,1] -> sqrt(1/3)
    SimplexPoly x = SimplexPoly::coordinate(1, 0);
    QuadRule r1 = simplex_rule(1, 2);
    REQUIRE(std::sqrt(integrate(r1, x * x)) == Catch::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("quadrature against Monte-Carlo oracle") {
    Rng rng(17);
    for (int d = 1; d <= 3; ++d) {
        SimplexPoly f = random_poly(d, 4, rng);
        auto [mc, se] = mc_integral(f, 1000000, rng);
        double exact = simplex_integral(f);
        double qd = integrate(simplex_rule(d, 4), f);
        REQUIRE(qd == Catch::Approx(exact).margin(1e-12));
        REQUIRE(std::fabs(mc - exact) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("triangle rules integrate monomials exactly") {
    for (int degree : {1, 2, 3, 4, 5, 6, 8, 10, 12}) {
        TriangleRule tr = triangle_rule(degree);
        REQUIRE(tr.degree >= degree);
        const auto& basis = monomial_basis(2, degree);
        for (const MultiIndex& q : basis.list) {
            // integrate x^q over reference triangle via barycentric nodes
            KahanSum s;
            for (std::size_t i = 0; i < tr.bary.size(); ++i) {
                double x = tr.bary[i][1], y = tr.bary[i][2];
                double v = 1.0;
                for (int e = 0; e < q[0]; ++e) v *= x;
                for (int e = 0; e < q[1]; ++e) v *= y;
                s.add(tr.weights[i] * v);
            }
            // weights sum to 1 on area 1/2
            double exact = simplex_monomial_integral(q, 2) * 2.0;
            REQUIRE(s.value() == Catch::Approx(exact).margin(1e-13));
        }
    }
}

TEST_CASE("subsimplex enumeration and parametrization") {
    auto edges = subsimplices(2, 1);
    REQUIRE(edges.size() == 3);
    auto faces3 = subsimplices(3, 2);
    REQUIRE(faces3.size() == 4);
    // facet of T^2 omitting node 0 is the hypotenuse
    SubSimplex g = facet(2, 0);
    auto mid = g.param({0.5});
    REQUIRE(mid[0] == Catch::Approx(0.5));
    REQUIRE(mid[1] == Catch::Approx(0.5));
    // pseudo-inverse inverts the parametrization on the affine hull
    auto inv = param_pseudo_inverse(g);
    Rng rng(5);
    for (int it = 0; it < 10; ++it) {
        std::vector<double> t{rng.next_unit()};
        auto x = g.param(t);
        REQUIRE(inv[0].eval(x) == Catch::Approx(t[0]).margin(1e-13));
    }
}

#include "hgraded/lifting.hpp"

TEST_CASE("poly_quadrature_norm: reference values and Monte-Carlo oracle") {
    // f = 1 on the reference triangle -> sqrt(1/2)
    REQUIRE(poly_quadrature_norm(SimplexPoly::constant(2, 1.0)) ==
            Catch::Approx(std::sqrt(0.5)).epsilon(1e-14));
    // f = x on [0,1] -> sqrt(1/3)
    REQUIRE(poly_quadrature_norm(SimplexPoly::coordinate(1, 0)) ==
            Catch::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    // facet variant: the hypotenuse of T^2 carries measure sqrt(2)
    REQUIRE(poly_quadrature_norm(SimplexPoly::constant(1, 1.0), facet(2, 0)) ==
            Catch::Approx(std::pow(2.0, 0.25)).epsilon(1e-13));
    // node facet: counting measure
    REQUIRE(poly_quadrature_norm(SimplexPoly::constant(0, -3.0), facet(1, 0)) ==
            Catch::Approx(3.0));

    // agreement with the exact closed-form norm (and with MC via the earlier test)
    Rng rng(19);
    for (int d = 1; d <= 3; ++d) {
        SimplexPoly f = random_poly(d, 5, rng);
        REQUIRE(poly_quadrature_norm(f) == Catch::Approx(simplex_l2_norm(f)).epsilon(1e-12));
        auto [mc, se] = mc_integral(f * f, 400000, rng);
        double qn = poly_quadrature_norm(f);
        REQUIRE(std::fabs(mc - qn * qn) <= 3.0 * se + 1e-12);
    }
}
