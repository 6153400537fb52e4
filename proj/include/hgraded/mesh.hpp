#pragma once
//
// Project : hgraded
// Module  : mesh.hpp
// Purpose : conforming triangulations of the unit square with configurable
//           grading toward a boundary edge
//
// Grading: h_T ~ dist(x_T, Gamma)^{1-1/alpha} * H. alpha = 1 is uniform,
// alpha in (1,inf) algebraic with layer abscissae (k/L)^alpha, alpha = inf
// exponential with abscissae sigma^{L-k}, sigma = 1/(1+H); the innermost layer
// [0, sigma^{L-1}] is meshed uniformly at its own width.
//
// Construction: the x-range is cut into layers, each layer into near-square
// columns; vertical cell counts are powers of two smoothed so adjacent layers
// differ by at most a factor 2, and the midpoints hanging at a 2:1 interface
// are resolved by splitting the coarser quad into three triangles.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"

namespace hgraded {

enum class EdgeTarget { left, right, bottom, top, none };

inline std::string to_string(EdgeTarget e) {
    switch (e) {
        case EdgeTarget::left: return "left";
        case EdgeTarget::right: return "right";
        case EdgeTarget::bottom: return "bottom";
        case EdgeTarget::top: return "top";
        default: return "none";
    }
}

inline EdgeTarget edge_from_string(const std::string& s) {
    if (s == "left") return EdgeTarget::left;
    if (s == "right") return EdgeTarget::right;
    if (s == "bottom") return EdgeTarget::bottom;
    if (s == "top") return EdgeTarget::top;
    if (s == "none") return EdgeTarget::none;
    throw config_error("unknown edge target: " + s);
}

struct GradingSpec {
    double alpha = 1.0;  // in [1, inf]; infinity() = exponential grading
    double H = 0.25;     // in (0, 1]
    EdgeTarget edge = EdgeTarget::none;
    int layers = 0;       // 0 = derive from H (algebraic) / h_floor (exponential)
    double h_floor = 0.0; // optional termination control for alpha = inf

    void validate() const {
        if (!(H > 0.0) || H > 1.0) throw config_error("GradingSpec: H must be in (0,1]");
        if (!(alpha >= 1.0)) throw config_error("GradingSpec: alpha must be >= 1 (or inf)");
        if (layers < 0) throw config_error("GradingSpec: layers must be >= 1 (or 0 = auto)");
        if (std::isinf(alpha) && layers == 0 && !(h_floor > 0.0))
            throw config_error("GradingSpec: exponential grading needs layers or h_floor");
    }
};

struct Vertex {
    Vec2 coords;
    bool on_boundary = false;
};

struct Element {
    int v[3] = {0, 0, 0};
    double twice_area = 0.0;
};

struct GradingStats {
    double ratio_min = 0.0;   // min over T of h_T / (dist(x_T,Gamma)^{1-1/alpha} H)
    double ratio_max = 0.0;
    double shape_max = 0.0;   // max over T of h_T / (2 * inradius_T)
};

struct Mesh {
    std::vector<Vertex> vertices;
    std::vector<Element> elements;
    GradingSpec grading;
    std::vector<double> layer_abscissae;  // generation metadata; empty if imported
    GradingStats stats;

    int n_vertices() const { return int(vertices.size()); }
    int n_elements() const { return int(elements.size()); }
};

// --- element geometry -------------------------------------------------------

inline double element_twice_area(const Mesh& m, const Element& e) {
    Vec2 a = m.vertices[e.v[0]].coords;
    Vec2 b = m.vertices[e.v[1]].coords;
    Vec2 c = m.vertices[e.v[2]].coords;
    return cross(b - a, c - a);
}

// h_T: longest edge (exact diameter for triangles)
inline double element_diameter(const Mesh& m, const Element& e) {
    Vec2 a = m.vertices[e.v[0]].coords;
    Vec2 b = m.vertices[e.v[1]].coords;
    Vec2 c = m.vertices[e.v[2]].coords;
    return std::max({norm2(b - a), norm2(c - b), norm2(a - c)});
}

inline double element_inradius(const Mesh& m, const Element& e) {
    Vec2 a = m.vertices[e.v[0]].coords;
    Vec2 b = m.vertices[e.v[1]].coords;
    Vec2 c = m.vertices[e.v[2]].coords;
    double per = norm2(b - a) + norm2(c - b) + norm2(a - c);
    return e.twice_area / per;
}

inline Vec2 element_incenter(const Mesh& m, const Element& e) {
    Vec2 a = m.vertices[e.v[0]].coords;
    Vec2 b = m.vertices[e.v[1]].coords;
    Vec2 c = m.vertices[e.v[2]].coords;
    double la = norm2(c - b);  // opposite a
    double lb = norm2(a - c);
    double lc = norm2(b - a);
    double s = la + lb + lc;
    return {(la * a.x + lb * b.x + lc * c.x) / s, (la * a.y + lb * b.y + lc * c.y) / s};
}

inline Box2 element_bbox(const Mesh& m, const Element& e) {
    Box2 b = Box2::point(m.vertices[e.v[0]].coords);
    b.expand(m.vertices[e.v[1]].coords);
    b.expand(m.vertices[e.v[2]].coords);
    return b;
}

inline Box2 element_bbox(const Mesh& m, int element_id) {
    return element_bbox(m, m.elements[element_id]);
}

inline double dist_to_edge(Vec2 p, EdgeTarget edge) {
    switch (edge) {
        case EdgeTarget::left: return p.x;
        case EdgeTarget::right: return 1.0 - p.x;
        case EdgeTarget::bottom: return p.y;
        case EdgeTarget::top: return 1.0 - p.y;
        default: return 0.0;
    }
}

// --- validation --------------------------------------------------------------

// Conformity, cover, orientation, shape regularity. Throws on violation and
// fills the shape statistic.
inline void validate_mesh(Mesh& m, double shape_budget = 10.0) {
    if (m.vertices.empty() || m.elements.empty()) throw numeric_error("mesh: empty");
    for (const auto& v : m.vertices) {
        if (v.coords.x < -1e-14 || v.coords.x > 1 + 1e-14 || v.coords.y < -1e-14 ||
            v.coords.y > 1 + 1e-14)
            throw numeric_error("mesh: vertex outside unit square");
    }
    KahanSum area;
    double shape_max = 0.0;
    std::map<std::pair<int, int>, int> edge_count;
    for (auto& e : m.elements) {
        if (e.v[0] == e.v[1] || e.v[1] == e.v[2] || e.v[0] == e.v[2])
            throw numeric_error("mesh: degenerate element");
        e.twice_area = element_twice_area(m, e);
        if (!(e.twice_area > 0.0)) throw numeric_error("mesh: non-positive element orientation");
        area.add(0.5 * e.twice_area);
        shape_max = std::max(shape_max, element_diameter(m, e) / (2.0 * element_inradius(m, e)));
        for (int k = 0; k < 3; ++k) {
            int a = e.v[k], b = e.v[(k + 1) % 3];
            edge_count[{std::min(a, b), std::max(a, b)}] += 1;
        }
    }
    if (std::fabs(area.value() - 1.0) > 1e-12) throw numeric_error("mesh: element areas do not cover the square");
    for (const auto& [edge, count] : edge_count) {
        if (count > 2) throw numeric_error("mesh: edge shared by more than two elements");
        if (count == 1) {
            // boundary edge must lie on the boundary of the square
            Vec2 a = m.vertices[edge.first].coords;
            Vec2 b = m.vertices[edge.second].coords;
            Vec2 mid = 0.5 * (a + b);
            bool on = mid.x < 1e-14 || mid.x > 1 - 1e-14 || mid.y < 1e-14 || mid.y > 1 - 1e-14;
            if (!on) throw numeric_error("mesh: interior edge with multiplicity 1 (hanging node)");
            if (!m.vertices[edge.first].on_boundary || !m.vertices[edge.second].on_boundary)
                throw numeric_error("mesh: boundary edge with unflagged vertex");
        }
    }
    if (shape_max > shape_budget) throw numeric_error("mesh: shape-regularity budget exceeded");
    m.stats.shape_max = shape_max;
}

// --- generation --------------------------------------------------------------

namespace meshdetail {

// exact dyadic y-coordinate: num/den with den a power of two
struct YKey {
    std::int64_t num;
    std::int64_t den;
    bool operator<(const YKey& o) const { return num * o.den < o.num * den; }
    bool operator==(const YKey& o) const { return num == o.num && den == o.den; }
};

inline YKey make_y(std::int64_t j, std::int64_t m) {
    while (j % 2 == 0 && m % 2 == 0) {
        j /= 2;
        m /= 2;
    }
    return {j, m};
}

struct Builder {
    std::vector<double> xs;  // station abscissae, ascending, xs.front()=0, xs.back()=1
    std::vector<Vertex> vertices;
    std::vector<Element> elements;
    std::map<std::pair<int, std::pair<std::int64_t, std::int64_t>>, int> vidx;

    int vertex(int station, std::int64_t j, std::int64_t m) {
        YKey y = make_y(j, m);
        auto key = std::make_pair(station, std::make_pair(y.num, y.den));
        auto it = vidx.find(key);
        if (it != vidx.end()) return it->second;
        double yy = double(y.num) / double(y.den);
        double xx = xs[station];
        bool bnd = station == 0 || station == int(xs.size()) - 1 || y.num == 0 || y.num == y.den;
        vertices.push_back({{xx, yy}, bnd});
        int id = int(vertices.size()) - 1;
        vidx[key] = id;
        return id;
    }

    void tri(int a, int b, int c) {
        Element e;
        e.v[0] = a;
        e.v[1] = b;
        e.v[2] = c;
        elements.push_back(e);
    }

    // one vertical slab [station s, station s+1] with m rows; neighbours'
    // row counts decide hanging-node resolution (ratio 1 or 2 enforced upstream)
    void slab(int s, std::int64_t m, std::int64_t m_left, std::int64_t m_right) {
        const bool hang_left = (m_left == 2 * m);
        const bool hang_right = (m_right == 2 * m);
        if (m_left > 2 * m || (m_left != 0 && 2 * m_left < m) || m_right > 2 * m ||
            (m_right != 0 && 2 * m_right < m))
            throw numeric_error("mesh generator: slab ratio exceeds 2");
        for (std::int64_t j = 0; j < m; ++j) {
            int A = vertex(s, j, m);
            int B = vertex(s + 1, j, m);
            int C = vertex(s + 1, j + 1, m);
            int D = vertex(s, j + 1, m);
            if (hang_left && hang_right) throw numeric_error("mesh generator: double hanging cell");
            if (hang_left) {
                int Ml = vertex(s, 2 * j + 1, 2 * m);
                tri(B, C, D);
                tri(B, D, Ml);
                tri(B, Ml, A);
            } else if (hang_right) {
                int Mr = vertex(s + 1, 2 * j + 1, 2 * m);
                tri(A, B, Mr);
                tri(A, Mr, C);
                tri(A, C, D);
            } else {
                tri(A, B, C);
                tri(A, C, D);
            }
        }
    }
};

inline void transform_mesh(Mesh& m, EdgeTarget edge) {
    bool flip = false;
    for (auto& v : m.vertices) {
        Vec2 p = v.coords;
        switch (edge) {
            case EdgeTarget::left: break;
            case EdgeTarget::right: p = {1.0 - p.x, p.y}; flip = true; break;
            case EdgeTarget::bottom: p = {p.y, p.x}; flip = true; break;
            case EdgeTarget::top: p = {p.y, 1.0 - p.x}; break;
            default: break;
        }
        v.coords = p;
    }
    if (flip)
        for (auto& e : m.elements) std::swap(e.v[1], e.v[2]);
}

}  // namespace meshdetail

// Uniform n x n grid, consistent diagonals.
inline Mesh make_uniform_mesh(int n) {
    if (n < 1) throw config_error("make_uniform_mesh: n >= 1 required");
    Mesh m;
    m.grading.alpha = 1.0;
    m.grading.H = 1.0 / n;
    m.grading.edge = EdgeTarget::none;
    m.grading.layers = n;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            bool bnd = i == 0 || i == n || j == 0 || j == n;
            m.vertices.push_back({{double(i) / n, double(j) / n}, bnd});
        }
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Element e1, e2;
            e1.v[0] = id(i, j); e1.v[1] = id(i + 1, j); e1.v[2] = id(i + 1, j + 1);
            e2.v[0] = id(i, j); e2.v[1] = id(i + 1, j + 1); e2.v[2] = id(i, j + 1);
            m.elements.push_back(e1);
            m.elements.push_back(e2);
        }
    for (int k = 0; k <= n; ++k) m.layer_abscissae.push_back(double(k) / n);
    validate_mesh(m);
    return m;
}

inline Mesh make_graded_mesh(const GradingSpec& spec) {
    spec.validate();

    // uniform route
    if (spec.edge == EdgeTarget::none || spec.alpha == 1.0) {
        int n = spec.layers > 0 ? spec.layers : int(std::ceil(1.0 / spec.H - 1e-12));
        Mesh m = make_uniform_mesh(std::max(1, n));
        m.grading = spec;
        m.grading.layers = n;
        return m;
    }

    // layer abscissae in [0,1], graded toward x = 0
    std::vector<double> xs{0.0};
    int L = spec.layers;
    if (std::isinf(spec.alpha)) {
        const double sigma = 1.0 / (1.0 + spec.H);
        if (L == 0) {
            L = 2;
            while (std::pow(sigma, L - 1) > spec.h_floor && L < 200) ++L;
        }
        if (L <= 1) {
            std::cerr << "[hgraded] warning: grading degenerates to a single layer; "
                         "falling back to a uniform mesh\n";
            Mesh m = make_uniform_mesh(int(std::ceil(1.0 / spec.H - 1e-12)));
            m.grading = spec;
            return m;
        }
        double w_inner = std::pow(sigma, L - 1);
        if (w_inner < 1e-13)
            throw config_error("make_graded_mesh: layer_count drives h_min below representable width");
        // one running product keeps consecutive abscissa ratios exact to a few ulp
        std::vector<double> pw(L + 1);
        pw[L] = 1.0;
        for (int k = L - 1; k >= 1; --k) pw[k] = sigma * pw[k + 1];
        for (int k = 1; k <= L; ++k) xs.push_back(pw[k]);
    } else {
        if (L == 0) L = std::max(2, int(std::llround(1.0 / spec.H)));
        if (L <= 1) {
            std::cerr << "[hgraded] warning: grading degenerates to a single layer; "
                         "falling back to a uniform mesh\n";
            Mesh m = make_uniform_mesh(int(std::ceil(1.0 / spec.H - 1e-12)));
            m.grading = spec;
            return m;
        }
        for (int k = 1; k <= L; ++k) xs.push_back(std::pow(double(k) / L, spec.alpha));
        if (xs[1] < 1e-13)
            throw config_error("make_graded_mesh: layer_count drives h_min below representable width");
    }

    // vertical cell counts: power-of-two, smoothed to adjacent ratio <= 2
    const int nl = int(xs.size()) - 1;
    std::vector<double> width(nl);
    for (int k = 0; k < nl; ++k) width[k] = xs[k + 1] - xs[k];
    std::vector<std::int64_t> rows(nl);
    for (int k = 0; k < nl; ++k) {
        double need = 1.0 / width[k];
        if (need > double(std::int64_t(1) << 40))
            throw config_error("make_graded_mesh: layer width below representable resolution");
        rows[k] = std::int64_t(pow2_ceil(need));
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (int k = 0; k < nl; ++k) {
            std::int64_t lo = 1;
            if (k > 0) lo = std::max(lo, rows[k - 1] / 2);
            if (k + 1 < nl) lo = std::max(lo, rows[k + 1] / 2);
            if (rows[k] < lo) {
                rows[k] = lo;  // counts are powers of two, so lo is one as well
                changed = true;
            }
        }
    }

    // near-square columns inside each layer; estimate size before building
    std::vector<int> cols(nl);
    double total_cells = 0.0;
    for (int k = 0; k < nl; ++k) {
        cols[k] = std::max(1, int(std::llround(width[k] * double(rows[k]))));
        total_cells += double(cols[k]) * double(rows[k]);
    }
    if (total_cells > 4e6) throw config_error("make_graded_mesh: requested mesh too large");

    meshdetail::Builder b;
    std::vector<std::int64_t> slab_rows;
    b.xs.push_back(0.0);
    for (int k = 0; k < nl; ++k) {
        for (int c = 1; c <= cols[k]; ++c) {
            double x = (c == cols[k]) ? xs[k + 1] : xs[k] + width[k] * double(c) / cols[k];
            b.xs.push_back(x);
            slab_rows.push_back(rows[k]);
        }
    }
    for (std::size_t s = 0; s < slab_rows.size(); ++s) {
        std::int64_t ml = (s == 0) ? 0 : slab_rows[s - 1];
        std::int64_t mr = (s + 1 == slab_rows.size()) ? 0 : slab_rows[s + 1];
        b.slab(int(s), slab_rows[s], ml, mr);
    }

    Mesh m;
    m.vertices = std::move(b.vertices);
    m.elements = std::move(b.elements);
    m.grading = spec;
    m.grading.layers = L;
    m.layer_abscissae = xs;
    meshdetail::transform_mesh(m, spec.edge);
    validate_mesh(m);

    // grading equivalence constants (reported, not asserted here)
    double exponent = std::isinf(spec.alpha) ? 1.0 : 1.0 - 1.0 / spec.alpha;
    double rmin = kInf, rmax = 0.0;
    for (const auto& e : m.elements) {
        double dist = dist_to_edge(element_incenter(m, e), spec.edge);
        double ratio = element_diameter(m, e) / (std::pow(dist, exponent) * spec.H);
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    m.stats.ratio_min = rmin;
    m.stats.ratio_max = rmax;
    return m;
}

// --- queries -----------------------------------------------------------------

inline std::pair<double, double> mesh_widths(const Mesh& m) {
    double hmin = kInf, hmax = 0.0;
    for (const auto& e : m.elements) {
        double h = element_diameter(m, e);
        hmin = std::min(hmin, h);
        hmax = std::max(hmax, h);
    }
    return {hmin, hmax};
}

// vertex -> incident elements
inline std::vector<std::vector<int>> vertex_adjacency(const Mesh& m) {
    std::vector<std::vector<int>> adj(m.vertices.size());
    for (int t = 0; t < m.n_elements(); ++t)
        for (int k = 0; k < 3; ++k) adj[m.elements[t].v[k]].push_back(t);
    return adj;
}

// all elements whose closure intersects the closure of T (shared vertex),
// including T itself
inline std::vector<int> element_patch(const Mesh& m, int element_id) {
    if (element_id < 0 || element_id >= m.n_elements())
        throw numeric_error("element_patch: id out of range");
    auto adj = vertex_adjacency(m);
    std::set<int> out;
    for (int k = 0; k < 3; ++k)
        for (int t : adj[m.elements[element_id].v[k]]) out.insert(t);
    return std::vector<int>(out.begin(), out.end());
}

// (card T)^{C_card} * h_min^2; near-constancy across a refinement family is the
// mesh-assumption diagnostic
inline double check_cardinality_assumption(const Mesh& m, double c_card) {
    if (c_card < 1.0) throw config_error("check_cardinality_assumption: C_card >= 1 required");
    auto [hmin, hmax] = mesh_widths(m);
    (void)hmax;
    return std::pow(double(m.n_elements()), c_card) * hmin * hmin;
}

// --- text format ---------------------------------------------------------------
//
// line 1: nv ne
// nv lines: x y b     (17 significant digits, b in {0,1})
// ne lines: v0 v1 v2  (0-based)

inline void export_mesh(const Mesh& m, const std::string& path) {
    if (path.empty()) throw config_error("export_mesh: empty path");
    std::ofstream out(path);
    if (!out) throw config_error("export_mesh: cannot open " + path);
    out << m.n_vertices() << " " << m.n_elements() << "\n";
    char buf[128];
    for (const auto& v : m.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %d\n", v.coords.x, v.coords.y,
                      v.on_boundary ? 1 : 0);
        out << buf;
    }
    for (const auto& e : m.elements) out << e.v[0] << " " << e.v[1] << " " << e.v[2] << "\n";
    if (!out) throw config_error("export_mesh: write failure");
}

inline Mesh import_mesh(const std::string& path) {
    if (path.empty()) throw config_error("import_mesh: empty path");
    std::ifstream in(path);
    if (!in) throw config_error("import_mesh: cannot open " + path);
    int nv = 0, ne = 0;
    if (!(in >> nv >> ne) || nv <= 0 || ne <= 0) throw config_error("import_mesh: bad header");
    Mesh m;
    m.vertices.resize(nv);
    for (auto& v : m.vertices) {
        int b = 0;
        if (!(in >> v.coords.x >> v.coords.y >> b)) throw config_error("import_mesh: bad vertex line");
        v.on_boundary = b != 0;
    }
    m.elements.resize(ne);
    for (auto& e : m.elements) {
        if (!(in >> e.v[0] >> e.v[1] >> e.v[2])) throw config_error("import_mesh: bad element line");
        for (int k = 0; k < 3; ++k)
            if (e.v[k] < 0 || e.v[k] >= nv) throw config_error("import_mesh: vertex id out of range");
    }
    m.grading.edge = EdgeTarget::none;
    validate_mesh(m);
    return m;
}

}  // namespace hgraded
