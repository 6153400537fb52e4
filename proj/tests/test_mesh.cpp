#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "hgraded/mesh.hpp"

using namespace hgraded;

namespace {

// Independent incircle computation for the grading/shape oracles: recomputes
// the radius as the true minimum distance from the weighted-average center to
// the three side lines.
struct InCircle {
    Vec2 center;
    double radius;
};

InCircle incircle_oracle(Vec2 a, Vec2 b, Vec2 c) {
    double la = norm2(c - b), lb = norm2(a - c), lc = norm2(b - a);
    double s = la + lb + lc;
    Vec2 p{(la * a.x + lb * b.x + lc * c.x) / s, (la * a.y + lb * b.y + lc * c.y) / s};
    auto line_dist = [&p](Vec2 u, Vec2 v) { return std::fabs(cross(v - u, p - u)) / norm2(v - u); };
    double r = std::min({line_dist(a, b), line_dist(b, c), line_dist(c, a)});
    return {p, r};
}

GradingSpec expspec(double H, int layers) {
    GradingSpec g;
    g.alpha = kInf;
    g.H = H;
    g.edge = EdgeTarget::left;
    g.layers = layers;
    return g;
}

}  // namespace

TEST_CASE("uniform mesh H=0.25 is the 4x4 grid of 32 congruent triangles") {
    GradingSpec g;
    g.alpha = 1.0;
    g.H = 0.25;
    g.edge = EdgeTarget::none;
    Mesh m = make_graded_mesh(g);
    REQUIRE(m.n_elements() == 32);
    REQUIRE(m.n_vertices() == 25);
    auto [hmin, hmax] = mesh_widths(m);
    REQUIRE(hmin == Catch::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(hmax == Catch::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(hmax / hmin <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("exponential grading: geometric abscissae with sigma = 1/(1+H)") {
    const double H = 0.25;
    Mesh m = make_graded_mesh(expspec(H, 10));
    const double sigma = 1.0 / (1.0 + H);
    REQUIRE(sigma == Catch::Approx(0.8).epsilon(1e-15));
    REQUIRE(int(m.layer_abscissae.size()) == 11);
    for (int k = 1; k <= 10; ++k)
        REQUIRE(m.layer_abscissae[k] == Catch::Approx(std::pow(sigma, 10 - k)).epsilon(1e-12));
    // grading fidelity: consecutive geometric layer widths have ratio sigma
    for (int k = 2; k + 1 <= 10; ++k) {
        double wk = m.layer_abscissae[k] - m.layer_abscissae[k - 1];
        double wk1 = m.layer_abscissae[k + 1] - m.layer_abscissae[k];
        REQUIRE(wk / wk1 == Catch::Approx(sigma).epsilon(1e-14));
    }
    // element widths shrink toward x = 0 (deeper mesh so the innermost
    // uniform patch is genuinely small)
    Mesh deep = make_graded_mesh(expspec(H, 16));
    double h_inner = kInf, h_outer = 0.0;
    for (const auto& e : deep.elements) {
        Vec2 c = element_incenter(deep, e);
        double h = element_diameter(deep, e);
        if (c.x < 0.1) h_inner = std::min(h_inner, h);
        if (c.x > 0.9) h_outer = std::max(h_outer, h);
    }
    REQUIRE(h_inner < 0.3 * h_outer);
}

TEST_CASE("mesh widths: single right triangle oracle and exponential family") {
    Mesh m1 = make_uniform_mesh(1);
    auto [h1min, h1max] = mesh_widths(m1);
    (void)h1min;
    REQUIRE(h1max == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));

    // alpha=inf, H=0.25, L=10: h_min/h_max tracks the generated layer widths,
    // which sit at sigma^{L-1} scale up to the shape constant
    Mesh m = make_graded_mesh(expspec(0.25, 10));
    auto [hmin, hmax] = mesh_widths(m);
    double wmin = kInf, wmax = 0.0;
    for (std::size_t k = 1; k < m.layer_abscissae.size(); ++k) {
        double w = m.layer_abscissae[k] - m.layer_abscissae[k - 1];
        wmin = std::min(wmin, w);
        wmax = std::max(wmax, w);
    }
    REQUIRE(hmin / hmax >= (wmin / wmax) / 3.0);
    REQUIRE(hmin / hmax <= (wmin / wmax) * 3.0);
    double sigma_pow = std::pow(0.8, 9);
    REQUIRE(hmin / hmax >= sigma_pow / 4.0);
    REQUIRE(hmin / hmax <= sigma_pow * 4.0);
}

TEST_CASE("algebraic grading alpha=2: equivalence ratio within [0.3, 3]") {
    for (int L : {4, 8, 16}) {
        GradingSpec g;
        g.alpha = 2.0;
        g.H = 1.0 / L;
        g.edge = EdgeTarget::left;
        g.layers = L;
        Mesh m = make_graded_mesh(g);
        for (const auto& e : m.elements) {
            Vec2 a = m.vertices[e.v[0]].coords;
            Vec2 b = m.vertices[e.v[1]].coords;
            Vec2 c = m.vertices[e.v[2]].coords;
            InCircle ic = incircle_oracle(a, b, c);
            double h = std::max({norm2(b - a), norm2(c - b), norm2(a - c)});
            double ratio = h / (std::sqrt(ic.center.x) * g.H);
            REQUIRE(ratio >= 0.3);
            REQUIRE(ratio <= 3.0);
        }
        REQUIRE(m.stats.ratio_min >= 0.3);
        REQUIRE(m.stats.ratio_max <= 3.0);
    }
}

TEST_CASE("shape regularity budget holds on all generated meshes") {
    std::vector<Mesh> meshes;
    meshes.push_back(make_uniform_mesh(7));
    meshes.push_back(make_graded_mesh(expspec(0.25, 14)));
    meshes.push_back(make_graded_mesh(expspec(1.0, 12)));
    {
        GradingSpec g;
        g.alpha = 3.0;
        g.H = 0.125;
        g.edge = EdgeTarget::top;
        g.layers = 8;
        meshes.push_back(make_graded_mesh(g));
    }
    for (auto& m : meshes) {
        double worst = 0.0;
        for (const auto& e : m.elements) {
            Vec2 a = m.vertices[e.v[0]].coords;
            Vec2 b = m.vertices[e.v[1]].coords;
            Vec2 c = m.vertices[e.v[2]].coords;
            InCircle ic = incircle_oracle(a, b, c);
            double h = std::max({norm2(b - a), norm2(c - b), norm2(a - c)});
            worst = std::max(worst, h / (2.0 * ic.radius));
        }
        REQUIRE(worst <= 10.0);
        REQUIRE(m.stats.shape_max <= 10.0);
    }
}

TEST_CASE("grading toward each edge orients the refinement correctly") {
    for (EdgeTarget edge : {EdgeTarget::left, EdgeTarget::right, EdgeTarget::bottom, EdgeTarget::top}) {
        GradingSpec g;
        g.alpha = kInf;
        g.H = 0.25;
        g.edge = edge;
        g.layers = 12;
        Mesh m = make_graded_mesh(g);
        double best = kInf;
        Vec2 where{0, 0};
        for (const auto& e : m.elements) {
            double h = element_diameter(m, e);
            if (h < best) {
                best = h;
                where = element_incenter(m, e);
            }
        }
        REQUIRE(dist_to_edge(where, edge) < 0.2);
    }
}

TEST_CASE("element patch: interior of a 4x4 uniform grid has 13 elements") {
    Mesh m = make_uniform_mesh(4);
    int interior_count = 0;
    int corner_size = 1000, interior_size = 0;
    for (int t = 0; t < m.n_elements(); ++t) {
        int p = int(element_patch(m, t).size());
        bool touches_boundary = false;
        for (int k = 0; k < 3; ++k) touches_boundary |= m.vertices[m.elements[t].v[k]].on_boundary;
        if (!touches_boundary) {
            ++interior_count;
            interior_size = p;
            REQUIRE(p == 13);
        } else {
            corner_size = std::min(corner_size, p);
        }
    }
    REQUIRE(interior_count > 0);
    REQUIRE(corner_size < interior_size);  // boundary truncation shrinks patches

    // single-element mesh: patch is the element itself
    Mesh one;
    one.vertices = {{{0, 0}, true}, {{1, 0}, true}, {{1, 1}, true}};
    Element e;
    e.v[0] = 0;
    e.v[1] = 1;
    e.v[2] = 2;
    one.elements = {e};
    REQUIRE(element_patch(one, 0) == std::vector<int>{0});
    REQUIRE_THROWS_AS(element_patch(one, 5), numeric_error);
}

TEST_CASE("cardinality assumption diagnostics") {
    // uniform family with C_card = 1: constant across refinements
    double v8 = check_cardinality_assumption(make_uniform_mesh(8), 1.0);
    double v16 = check_cardinality_assumption(make_uniform_mesh(16), 1.0);
    double v32 = check_cardinality_assumption(make_uniform_mesh(32), 1.0);
    REQUIRE(v8 == Catch::Approx(4.0).epsilon(1e-12));
    REQUIRE(v16 == Catch::Approx(v8).epsilon(1e-10));
    REQUIRE(v32 == Catch::Approx(v8).epsilon(1e-10));

    // alpha=2 family with C_card = 2: bounded below
    double lo = kInf;
    for (int L : {4, 8, 16}) {
        GradingSpec g;
        g.alpha = 2.0;
        g.H = 1.0 / L;
        g.edge = EdgeTarget::left;
        g.layers = L;
        lo = std::min(lo, check_cardinality_assumption(make_graded_mesh(g), 2.0));
    }
    REQUIRE(lo > 0.5);

    // alpha=inf family with C_card = 1: tends to zero as L grows
    double v6 = check_cardinality_assumption(make_graded_mesh(expspec(0.25, 6)), 1.0);
    double v10 = check_cardinality_assumption(make_graded_mesh(expspec(0.25, 10)), 1.0);
    double v14 = check_cardinality_assumption(make_graded_mesh(expspec(0.25, 14)), 1.0);
    REQUIRE(v10 < v6);
    REQUIRE(v14 < v10);
    REQUIRE(v14 < 0.25 * v6);
}

TEST_CASE("mesh export/import round trip") {
    Mesh m = make_graded_mesh(expspec(0.25, 9));
    const std::string path = "roundtrip_mesh.txt";
    export_mesh(m, path);
    Mesh r = import_mesh(path);
    REQUIRE(r.n_vertices() == m.n_vertices());
    REQUIRE(r.n_elements() == m.n_elements());
    for (int i = 0; i < m.n_vertices(); ++i) {
        REQUIRE(std::fabs(r.vertices[i].coords.x - m.vertices[i].coords.x) <= 1e-15);
        REQUIRE(std::fabs(r.vertices[i].coords.y - m.vertices[i].coords.y) <= 1e-15);
        REQUIRE(r.vertices[i].on_boundary == m.vertices[i].on_boundary);
    }
    for (int t = 0; t < m.n_elements(); ++t)
        for (int k = 0; k < 3; ++k) REQUIRE(r.elements[t].v[k] == m.elements[t].v[k]);
    auto [h0, H0] = mesh_widths(m);
    auto [h1, H1] = mesh_widths(r);
    REQUIRE(h1 == Catch::Approx(h0).epsilon(1e-15));
    REQUIRE(H1 == Catch::Approx(H0).epsilon(1e-15));
    std::remove(path.c_str());

    REQUIRE_THROWS_AS(export_mesh(m, ""), config_error);
    REQUIRE_THROWS_AS(import_mesh("does_not_exist_anywhere.txt"), config_error);
}

TEST_CASE("conformity: edge multiplicities and area conservation") {
    Mesh m = make_graded_mesh(expspec(0.25, 12));
    std::map<std::pair<int, int>, int> count;
    for (const auto& e : m.elements)
        for (int k = 0; k < 3; ++k) {
            int a = e.v[k], b = e.v[(k + 1) % 3];
            count[{std::min(a, b), std::max(a, b)}]++;
        }
    for (const auto& [edge, c] : count) {
        REQUIRE((c == 1 || c == 2));
        if (c == 1) {
            Vec2 mid = 0.5 * (m.vertices[edge.first].coords + m.vertices[edge.second].coords);
            bool on = mid.x < 1e-14 || mid.x > 1 - 1e-14 || mid.y < 1e-14 || mid.y > 1 - 1e-14;
            REQUIRE(on);
        }
    }
    KahanSum area;
    for (const auto& e : m.elements) area.add(0.5 * e.twice_area);
    REQUIRE(std::fabs(area.value() - 1.0) <= 1e-12);
}

TEST_CASE("degenerate grading falls back to a uniform mesh") {
    GradingSpec g;
    g.alpha = 4.0;
    g.H = 0.9;
    g.edge = EdgeTarget::left;
    g.layers = 1;
    Mesh m = make_graded_mesh(g);  // warns and falls back
    auto [hmin, hmax] = mesh_widths(m);
    REQUIRE(hmax / hmin <= std::sqrt(2.0) + 1e-12);

    REQUIRE_THROWS_AS(make_graded_mesh(expspec(0.25, 150)), config_error);
}

TEST_CASE("h_floor termination control picks the matching layer count") {
    GradingSpec g;
    g.alpha = kInf;
    g.H = 0.25;
    g.edge = EdgeTarget::left;
    g.layers = 0;
    g.h_floor = 0.05;  // smallest L with sigma^{L-1} <= 0.05 at sigma = 0.8
    Mesh m = make_graded_mesh(g);
    const double sigma = 0.8;
    int L = m.grading.layers;
    REQUIRE(std::pow(sigma, L - 1) <= g.h_floor + 1e-12);
    REQUIRE(std::pow(sigma, L - 2) > g.h_floor);
    REQUIRE(m.layer_abscissae.size() == std::size_t(L + 1));

    GradingSpec bad = g;
    bad.h_floor = 0.0;
    REQUIRE_THROWS_AS(make_graded_mesh(bad), config_error);
}
