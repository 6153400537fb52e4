#pragma once
//
// Project : hgraded
// Module  : spline_field.hpp
// Purpose : elementwise polynomial fields on a 2D mesh (reference pullbacks)
//           and the elementwise degree-reduction operator
//
// (J v)|_T = reduce(v o F_T) o F_T^{-1}; continuity and boundary values are
// preserved because the reduction's traces depend only on the input traces and
// commute with the affine reparametrizations of shared edges.
//

#include <cmath>
#include <map>
#include <vector>

#include "bernstein.hpp"
#include "common.hpp"
#include "degree_reduce.hpp"
#include "dofmap.hpp"
#include "mesh.hpp"
#include "simplex_poly.hpp"

namespace hgraded {

struct SplineField {
    const Mesh* mesh = nullptr;
    int degree = 0;
    std::vector<SimplexPoly> elem;  // pullback v o F_T per element, dim 2

    double eval_on(int t, double r1, double r2) const { return elem[t].eval({r1, r2}); }
};

// F_T maps reference (r1,r2) to a + r1 (b-a) + r2 (c-a).
inline void element_affine(const Mesh& m, int t, Vec2& a, Vec2& ab, Vec2& ac) {
    const Element& el = m.elements[t];
    a = m.vertices[el.v[0]].coords;
    ab = m.vertices[el.v[1]].coords - a;
    ac = m.vertices[el.v[2]].coords - a;
}

// global bivariate polynomial restricted elementwise
inline SplineField spline_from_global(const Mesh& mesh, const SimplexPoly& g) {
    if (g.dim() != 2) throw numeric_error("spline_from_global: need a bivariate polynomial");
    SplineField s;
    s.mesh = &mesh;
    s.degree = g.degree();
    s.elem.reserve(mesh.n_elements());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        Vec2 a, ab, ac;
        element_affine(mesh, t, a, ab, ac);
        auto fx = SimplexPoly::affine(2, a.x, {ab.x, ac.x});
        auto fy = SimplexPoly::affine(2, a.y, {ab.y, ac.y});
        s.elem.push_back(g.compose({fx, fy}).with_degree(g.degree()));
    }
    return s;
}

// Bernstein multi-index on local barycentrics as a reference-coordinate polynomial
inline SimplexPoly bernstein_to_poly(const MultiIndex& beta, int p) {
    SimplexPoly l0 = SimplexPoly::affine(2, 1.0, {-1.0, -1.0});
    SimplexPoly l1 = SimplexPoly::coordinate(2, 0);
    SimplexPoly l2 = SimplexPoly::coordinate(2, 1);
    SimplexPoly out = SimplexPoly::constant(2, bernstein_coeff(beta));
    for (int e = 0; e < beta[0]; ++e) out = out * l0;
    for (int e = 0; e < beta[1]; ++e) out = out * l1;
    for (int e = 0; e < beta[2]; ++e) out = out * l2;
    return out.with_degree(p);
}

// conforming global FEM function from an interior coefficient vector
inline SplineField spline_from_fem(const Mesh& mesh, const DofMap& dm, const std::vector<double>& u) {
    SplineField s;
    s.mesh = &mesh;
    s.degree = dm.p;
    s.elem.reserve(mesh.n_elements());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        SimplexPoly acc(2, dm.p);
        const auto& table = dm.element_dofs[t];
        for (int li = 0; li < dm.local_count(); ++li) {
            int g = table[li];
            if (g < 0 || u[g] == 0.0) continue;
            acc += u[g] * bernstein_to_poly(dm.local_indices[li], dm.p);
        }
        s.elem.push_back(std::move(acc));
    }
    return s;
}

// max inter-element jump sampled along shared edges (n points per edge)
inline double spline_continuity_defect(const SplineField& s, int samples_per_edge = 20) {
    const Mesh& m = *s.mesh;
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;  // edge -> (elem, local edge)
    for (int t = 0; t < m.n_elements(); ++t)
        for (int k = 0; k < 3; ++k) {
            int a = m.elements[t].v[k], b = m.elements[t].v[(k + 1) % 3];
            edges[{std::min(a, b), std::max(a, b)}].push_back({t, k});
        }
    // reference coordinates of the local vertices
    const double ref[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    double worst = 0.0;
    for (const auto& [edge, owners] : edges) {
        if (owners.size() != 2) continue;
        for (int q = 1; q < samples_per_edge; ++q) {
            double tpar = double(q) / samples_per_edge;
            double vals[2];
            for (int o = 0; o < 2; ++o) {
                auto [t, k] = owners[o];
                const Element& el = m.elements[t];
                // local indices of the edge endpoints ordered by global id
                int la = k, lb = (k + 1) % 3;
                if (el.v[la] > el.v[lb]) std::swap(la, lb);
                double r1 = (1.0 - tpar) * ref[la][0] + tpar * ref[lb][0];
                double r2 = (1.0 - tpar) * ref[la][1] + tpar * ref[lb][1];
                vals[o] = s.eval_on(t, r1, r2);
            }
            worst = std::max(worst, std::fabs(vals[0] - vals[1]));
        }
    }
    return worst;
}

// boundary trace sampled along multiplicity-1 edges
inline double spline_boundary_defect(const SplineField& s, int samples_per_edge = 10) {
    const Mesh& m = *s.mesh;
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
    for (int t = 0; t < m.n_elements(); ++t)
        for (int k = 0; k < 3; ++k) {
            int a = m.elements[t].v[k], b = m.elements[t].v[(k + 1) % 3];
            edges[{std::min(a, b), std::max(a, b)}].push_back({t, k});
        }
    const double ref[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    double worst = 0.0;
    for (const auto& [edge, owners] : edges) {
        if (owners.size() != 1) continue;
        auto [t, k] = owners[0];
        int la = k, lb = (k + 1) % 3;
        for (int q = 0; q <= samples_per_edge; ++q) {
            double tpar = double(q) / samples_per_edge;
            double r1 = (1.0 - tpar) * ref[la][0] + tpar * ref[lb][0];
            double r2 = (1.0 - tpar) * ref[la][1] + tpar * ref[lb][1];
            worst = std::max(worst, std::fabs(s.eval_on(t, r1, r2)));
        }
    }
    return worst;
}

// Elementwise degree reduction of a continuous degree-(p+2) spline. Rejects
// discontinuous inputs (sampled at shared edges).
inline SplineField elementwise_reduce(const SplineField& v, int p) {
    if (v.degree > p + 2) throw numeric_error("elementwise_reduce: input degree exceeds p+2");
    double scale = 0.0;
    for (const auto& e : v.elem) scale = std::max(scale, e.max_abs_coeff());
    if (spline_continuity_defect(v) > 1e-9 * std::max(1.0, scale))
        throw numeric_error("elementwise_reduce: discontinuous input detected at shared-edge samples");
    SplineField out;
    out.mesh = v.mesh;
    out.degree = p;
    out.elem.reserve(v.elem.size());
    for (const auto& e : v.elem) out.elem.push_back(degree_reduce(e.with_degree(p + 2), p));
    return out;
}

// L2 norm and H1 seminorm of an element pullback on the physical element
inline double element_l2_norm_sq(const Mesh& m, int t, const SimplexPoly& pb) {
    return m.elements[t].twice_area * simplex_inner(pb, pb);
}

inline double element_h1_seminorm_sq(const Mesh& m, int t, const SimplexPoly& pb) {
    Vec2 a, ab, ac;
    element_affine(m, t, a, ab, ac);
    double det = cross(ab, ac);
    // rows of J^{-T}: d/dx = ( ac.y * d1 - ab.y * d2 ) / det, d/dy = ( -ac.x d1 + ab.x d2 ) / det
    SimplexPoly d1 = pb.derivative(0);
    SimplexPoly d2 = pb.derivative(1);
    SimplexPoly px = (ac.y / det) * d1 + (-ab.y / det) * d2;
    SimplexPoly py = (-ac.x / det) * d1 + (ab.x / det) * d2;
    return std::fabs(det) * (simplex_inner(px, px) + simplex_inner(py, py));
}

}  // namespace hgraded
