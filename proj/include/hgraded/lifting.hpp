#pragma once
//
// Project : hgraded
// Module  : lifting.hpp
// Purpose : polynomial-preserving lifting from facets and from the whole
//           boundary of the reference simplex, in arbitrary dimension
//
// Facet lifting: with n the normal of the facet G normalized against the
// opposite node N_d (<N_i - N_0, n> = 0, <N_d - N_0, n> = 1) and
// P(x) = N_d + <N_d - x, n>^{-1} (x - N_d) the central projection onto G,
//
//     (L_G f)(x) = <N_d - x, n>^p f(P(x)),
//
// which maps P_p(G) into P_p(T), keeps the trace on G, vanishes at N_d and
// propagates zeros from k-subsimplices of G to the joined (k+1)-subsimplices.
// The combined boundary lifting assembles M f = sum_G L_G (f|_G) and removes
// the node/edge overcounting through the telescoped coefficients derived from
// the factors (id - c_k R M), c_k = (d-k)^{-1}.
//

#include <cmath>
#include <vector>

#include "common.hpp"
#include "quadrature.hpp"
#include "simplex_poly.hpp"
#include "subsimplex.hpp"

namespace hgraded {

// Boundary polynomial: one (d-1)-variate polynomial per facet, facet i
// omitting node i, each in the facet's canonical parametrization.
struct BoundaryPoly {
    int dim = 0;  // ambient d
    int deg = 0;
    std::vector<SimplexPoly> face;  // size d+1

    BoundaryPoly() = default;
    BoundaryPoly(int d, int p) : dim(d), deg(p) {
        face.assign(d + 1, SimplexPoly(std::max(0, d - 1), p));
    }

    // value at a node of T (nodes lie on every facet not omitting them)
    double value_at_node(int node_id) const {
        int f = (node_id == 0) ? 1 : 0;  // any facet containing the node
        SubSimplex g = facet(dim, f);
        // locate node within the facet parametrization, eval at unit vector
        std::vector<double> t(std::max(0, dim - 1), 0.0);
        for (int i = 0; i <= g.k(); ++i) {
            if (g.node_ids[i] == node_id) {
                if (i > 0) t[i - 1] = 1.0;
                return face[f].eval(t);
            }
        }
        throw numeric_error("BoundaryPoly::value_at_node: bad node id");
    }

    BoundaryPoly& operator*=(double s) {
        for (auto& f : face) f *= s;
        return *this;
    }
    BoundaryPoly& operator+=(const BoundaryPoly& g) {
        for (int i = 0; i <= dim; ++i) face[i] += g.face[i];
        deg = std::max(deg, g.deg);
        return *this;
    }
    BoundaryPoly& operator-=(const BoundaryPoly& g) {
        for (int i = 0; i <= dim; ++i) face[i] -= g.face[i];
        deg = std::max(deg, g.deg);
        return *this;
    }
};

// Facet normal n with <N_i - N_0, n> = 0 (i = 1..d-1) and <N_d - N_0, n> = 1,
// where N_0..N_{d-1} span the facet (ascending ids) and N_d is the node the
// facet omits.
inline std::vector<double> facet_conormal(const SubSimplex& g, int opposite_id) {
    const int d = g.dim;
    std::vector<std::vector<double>> A(d, std::vector<double>(d + 1, 0.0));
    auto n0 = g.node(0);
    for (int i = 1; i < d; ++i) {
        auto ni = g.node(i);
        for (int j = 0; j < d; ++j) A[i - 1][j] = ni[j] - n0[j];
        A[i - 1][d] = 0.0;
    }
    auto nd = simplex_node(d, opposite_id);
    for (int j = 0; j < d; ++j) A[d - 1][j] = nd[j] - n0[j];
    A[d - 1][d] = 1.0;
    // Gaussian elimination with partial pivoting on the small system
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        std::swap(A[piv], A[col]);
        for (int r = 0; r < d; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (int c = col; c <= d; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::vector<double> n(d);
    for (int j = 0; j < d; ++j) n[j] = A[j][d] / A[j][j];
    return n;
}

// Volume/Gram determinants of the lifting proof: C1 = sqrt(det Gram of the
// facet spanning vectors), C2 = |det(N_1-N_0 | ... | N_d-N_0)| with the facet
// nodes first and the opposite node appended.
inline void lifting_constants(const SubSimplex& g, int opposite_id, double& c1, double& c2) {
    const int d = g.dim;
    c1 = facet_measure_factor(g);
    std::vector<std::vector<double>> M(d, std::vector<double>(d, 0.0));
    auto n0 = g.node(0);
    for (int i = 1; i < d; ++i) {
        auto ni = g.node(i);
        for (int j = 0; j < d; ++j) M[j][i - 1] = ni[j] - n0[j];
    }
    auto nd = simplex_node(d, opposite_id);
    for (int j = 0; j < d; ++j) M[j][d - 1] = nd[j] - n0[j];
    double det = 1.0;
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = -det;
        }
        det *= M[col][col];
        for (int r = col + 1; r < d; ++r) {
            double f = M[r][col] / M[col][col];
            for (int c = col; c < d; ++c) M[r][c] -= f * M[col][c];
        }
    }
    c2 = std::fabs(det);
}

// Lift a polynomial given on facet g (as a (d-1)-variate polynomial in the
// canonical parametrization) into P_p(T^d).
inline SimplexPoly lift_face(const SimplexPoly& f, const SubSimplex& g, int p) {
    const int d = g.dim;
    if (g.k() != d - 1) throw numeric_error("lift_face: not a facet");
    if (f.effective_degree() > p) throw numeric_error("lift_face: facet degree exceeds p");
    int opposite = -1;
    for (int id = 0; id <= d; ++id)
        if (!g.contains_node(id)) opposite = id;

    // ambient extension of f: compose with the pseudo-inverse of sigma
    SimplexPoly f_amb = (d == 1) ? SimplexPoly::constant(1, f.coeffs()[0])
                                 : f.compose(param_pseudo_inverse(g));

    // s(x) = <N_d - x, n>, w_i(x) = s(x) N_d_i + x_i - N_d_i
    auto n = facet_conormal(g, opposite);
    auto nd = simplex_node(d, opposite);
    double s0 = 0.0;
    for (int j = 0; j < d; ++j) s0 += nd[j] * n[j];
    std::vector<double> slin(d);
    for (int j = 0; j < d; ++j) slin[j] = -n[j];
    SimplexPoly s = SimplexPoly::affine(d, s0, slin);

    std::vector<SimplexPoly> w;
    for (int i = 0; i < d; ++i) {
        SimplexPoly wi = nd[i] * s;
        wi += SimplexPoly::coordinate(d, i);
        wi += SimplexPoly::constant(d, -nd[i]);
        w.push_back(wi);
    }

    // powers of s and w_i
    std::vector<SimplexPoly> spow(p + 1, SimplexPoly::constant(d, 1.0));
    for (int e = 1; e <= p; ++e) spow[e] = spow[e - 1] * s;

    SimplexPoly out(d, p);
    const auto& basis = f_amb.basis();
    for (int r = 0; r < basis.size(); ++r) {
        double c = f_amb.coeffs()[r];
        if (c == 0.0) continue;
        const MultiIndex& q = basis.list[r];
        int total = mi_total(q);
        SimplexPoly term = c * spow[p - total];
        for (int i = 0; i < d; ++i)
            for (int e = 0; e < q[i]; ++e) term = term * w[i];
        out += term.with_degree(p);
    }
    return out;
}

// Restriction of a volume polynomial to the boundary (operator R).
inline BoundaryPoly boundary_trace(const SimplexPoly& v, int p) {
    const int d = v.dim();
    BoundaryPoly out(d, p);
    for (int i = 0; i <= d; ++i) {
        SubSimplex g = facet(d, i);
        out.face[i] = v.compose(param_polys(g)).with_degree(p);
    }
    return out;
}

// M f = sum over facets of the facet liftings.
inline SimplexPoly boundary_sum_lift(const BoundaryPoly& f, int p) {
    const int d = f.dim;
    SimplexPoly out(d, p);
    for (int i = 0; i <= d; ++i) out += lift_face(f.face[i], facet(d, i), p);
    return out;
}

// Expanded coefficients of prod_{k=0}^{d-1} (1 - c_k X), c_k = (d-k)^{-1}:
// returns q with q[0] = 1 such that the product equals sum_k q[k] X^k.
// The combined lifting uses ct_k := -q[k], k = 1..d.
inline std::vector<double> telescop_coeffs(int d, double ck_scale = 1.0, int flip_index = -1) {
    std::vector<double> q{1.0};
    for (int k = 0; k < d; ++k) {
        double ck = ck_scale / double(d - k);
        if (k == flip_index) ck = -ck;
        std::vector<double> nq(q.size() + 1, 0.0);
        for (std::size_t i = 0; i < q.size(); ++i) {
            nq[i] += q[i];
            nq[i + 1] -= ck * q[i];
        }
        q = std::move(nq);
    }
    return q;
}

inline void require_compatible(const BoundaryPoly& f, double tol = 1e-11);

// Combined lifting L f = M sum_{k=0}^{d-1} ct_{k+1} (R M)^k f. Exact trace on
// the whole boundary for compatible inputs; incompatible face traces are
// rejected.
inline SimplexPoly combined_lift(const BoundaryPoly& f, int p, double ck_scale = 1.0,
                                 int flip_index = -1) {
    const int d = f.dim;
    require_compatible(f);
    auto q = telescop_coeffs(d, ck_scale, flip_index);
    BoundaryPoly acc(d, p);          // sum of ct_{k+1} (RM)^k f
    BoundaryPoly cur = f;            // (RM)^k f
    for (int k = 0; k < d; ++k) {
        double ct = -q[k + 1];
        BoundaryPoly scaled = cur;
        scaled *= ct;
        acc += scaled;
        if (k + 1 < d) cur = boundary_trace(boundary_sum_lift(cur, p), p);
    }
    return boundary_sum_lift(acc, p);
}

// Random sample on the boundary: returns (facet index, parameter t, ambient x).
struct BoundarySample {
    int face = 0;
    std::vector<double> t;
    std::vector<double> x;
};

inline BoundarySample sample_boundary(int d, Rng& rng) {
    BoundarySample s;
    s.face = int(rng.next_index(d + 1));
    // uniform barycentric point on T^{d-1} via exponential spacings
    int k = d - 1;
    s.t.assign(std::max(0, k), 0.0);
    if (k > 0) {
        std::vector<double> e(k + 1);
        double tot = 0.0;
        for (auto& v : e) {
            v = -std::log(1.0 - rng.next_unit());
            tot += v;
        }
        for (int i = 0; i < k; ++i) s.t[i] = e[i] / tot;
    }
    s.x = facet(d, s.face).param(s.t);
    return s;
}

// Max |v(x) - f(x)| over n random boundary samples.
inline double boundary_trace_residual(const SimplexPoly& v, const BoundaryPoly& f, int n, Rng& rng) {
    const int d = v.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        auto s = sample_boundary(d, rng);
        double a = v.eval(s.x);
        double b = f.face[s.face].eval(s.t);
        worst = std::max(worst, std::fabs(a - b));
    }
    return worst;
}

// Compatibility of facet traces across shared (d-2)-subsimplices, sampled.
inline double boundary_compat_residual(const BoundaryPoly& f, int samples_per_pair, Rng& rng) {
    const int d = f.dim;
    if (d < 2) return 0.0;
    double worst = 0.0;
    for (int i = 0; i <= d; ++i) {
        SubSimplex gi = facet(d, i);
        auto inv_i = param_pseudo_inverse(gi);
        for (int j = i + 1; j <= d; ++j) {
            SubSimplex gj = facet(d, j);
            auto inv_j = param_pseudo_inverse(gj);
            // shared simplex omits nodes i and j
            std::vector<int> shared;
            for (int id = 0; id <= d; ++id)
                if (id != i && id != j) shared.push_back(id);
            SubSimplex s = make_subsimplex(d, shared);
            for (int m = 0; m < samples_per_pair; ++m) {
                std::vector<double> t(std::max(0, s.k()), 0.0);
                if (s.k() > 0) {
                    std::vector<double> e(s.k() + 1);
                    double tot = 0.0;
                    for (auto& v : e) {
                        v = -std::log(1.0 - rng.next_unit());
                        tot += v;
                    }
                    for (int a = 0; a < s.k(); ++a) t[a] = e[a] / tot;
                }
                auto x = s.param(t);
                std::vector<double> ti(std::max(0, d - 1)), tj(std::max(0, d - 1));
                for (int a = 0; a < d - 1; ++a) {
                    ti[a] = inv_i[a].eval(x);
                    tj[a] = inv_j[a].eval(x);
                }
                double va = f.face[i].eval(ti);
                double vb = f.face[j].eval(tj);
                worst = std::max(worst, std::fabs(va - vb));
                if (s.k() == 0) break;  // single point
            }
        }
    }
    return worst;
}

// Throwing wrapper used by operations that require compatible inputs.
inline void require_compatible(const BoundaryPoly& f, double tol) {
    Rng rng(407);
    double r = boundary_compat_residual(f, 25, rng);
    double scale = 0.0;
    for (const auto& fp : f.face) scale = std::max(scale, fp.max_abs_coeff());
    if (r > tol * std::max(1.0, scale)) throw numeric_error("incompatible face traces");
}

// L2 norm of a facet polynomial (facet parametrization) with the correct
// surface measure, by Grundmann-Moeller quadrature on the parameter domain.
inline double poly_quadrature_norm(const SimplexPoly& f, const SubSimplex& face) {
    if (face.k() == 0) return std::fabs(f.coeffs()[0]);  // counting measure
    QuadRule rule = simplex_rule(face.k(), 2 * std::max(1, f.degree()));
    KahanSum s;
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
        double v = f.eval(rule.points[i]);
        s.add(rule.weights[i] * v * v);
    }
    return std::sqrt(std::max(0.0, facet_measure_factor(face) * s.value()));
}

}  // namespace hgraded
