#pragma once
//
// Project : hgraded
// Module  : identity_suite.hpp
// Purpose : runnable pass/fail table over the exactly checkable operator
//           identities (lifting norm law, node scaling, telescoping,
//           projection, elementwise continuity, dual-basis duality)
//

#include <cmath>
#include <string>
#include <vector>

#include "bernstein.hpp"
#include "common.hpp"
#include "degree_reduce.hpp"
#include "lifting.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "spline_field.hpp"

namespace hgraded {

struct SuiteRow {
    std::string name;
    double worst = 0.0;
    double tol = 0.0;
    bool skipped = false;
    std::string note;
    bool pass() const { return skipped || worst <= tol; }
};

struct IdentityOptions {
    int d_only = 0;      // 0 = all of 1..3
    int p_only = 0;      // 0 = all of 1..6
    double ck_scale = 1.0;  // mutation hook for the telescoping coefficients
    int ck_flip = -1;       // index of a c_k to sign-flip (mutation hook)
};

namespace suitedetail {

inline SimplexPoly random_poly(int dim, int deg, Rng& rng) {
    SimplexPoly f(dim, deg);
    const auto& b = f.basis();
    for (int i = 0; i < b.size(); ++i) f.set(b.list[i], rng.next_real(-1.0, 1.0));
    return f;
}

}  // namespace suitedetail

// p > 6 at d = 3 exceeds the documented monomial-conditioning ceiling for the
// identity tolerances and is reported as skipped.
inline bool identity_case_skipped(int d, int p) { return (d >= 3 && p > 6) || p > 8; }

inline std::vector<SuiteRow> run_identity_suite(const IdentityOptions& opt = {}) {
    using suitedetail::random_poly;
    std::vector<SuiteRow> rows;
    Rng rng(0xABCDEF0101ULL);

    std::vector<int> ds, ps;
    for (int d = 1; d <= 3; ++d)
        if (opt.d_only == 0 || opt.d_only == d) ds.push_back(d);
    for (int p = 1; p <= 6; ++p)
        if (opt.p_only == 0 || opt.p_only == p) ps.push_back(p);
    if (opt.d_only > 3 || opt.p_only > 8) {
        rows.push_back({"parameters", 0.0, 0.0, true, "outside supported d/p range"});
        return rows;
    }
    if (opt.p_only > 6) {
        // declared ceiling: run nothing, report the documented skip
        rows.push_back({"identities p=" + std::to_string(opt.p_only), 0.0, 0.0, true,
                        "conditioning ceiling: identity tolerances certified for p <= 6"});
        return rows;
    }

    // 1. facet lifting norm law (quadrature vs closed form, relative 1e-8)
    for (int d : ds) {
        SuiteRow row;
        row.name = "lifting_norm_law d=" + std::to_string(d);
        row.tol = 1e-8;
        for (int p : ps) {
            if (identity_case_skipped(d, p)) continue;
            QuadRule vol_rule = simplex_rule(d, 2 * p + 1);
            for (int rep = 0; rep < 20; ++rep) {
                int fi = int(rng.next_index(d + 1));
                SubSimplex g = facet(d, fi);
                SimplexPoly f = random_poly(std::max(0, d - 1), p, rng);
                SimplexPoly lifted = lift_face(f, g, p);
                KahanSum acc;
                for (std::size_t i = 0; i < vol_rule.points.size(); ++i) {
                    double v = lifted.eval(vol_rule.points[i]);
                    acc.add(vol_rule.weights[i] * v * v);
                }
                double c1, c2;
                lifting_constants(g, fi, c1, c2);
                double face_sq;
                if (d == 1) {
                    face_sq = f.coeffs()[0] * f.coeffs()[0];
                } else {
                    QuadRule face_rule = simplex_rule(d - 1, 2 * p + 1);
                    KahanSum fs;
                    for (std::size_t i = 0; i < face_rule.points.size(); ++i) {
                        double v = f.eval(face_rule.points[i]);
                        fs.add(face_rule.weights[i] * v * v);
                    }
                    face_sq = c1 * fs.value();
                }
                double rhs = (c2 / c1) / double(2 * p + d) * face_sq;
                if (rhs > 1e-14)
                    row.worst = std::max(row.worst, std::fabs(acc.value() - rhs) / rhs);
            }
        }
        rows.push_back(row);
    }

    // 2. node scaling (M f)(N) = d f(N)
    for (int d : ds) {
        SuiteRow row;
        row.name = "node_scaling d=" + std::to_string(d);
        row.tol = 1e-12;
        const int p = 4;
        for (int rep = 0; rep < 10; ++rep) {
            BoundaryPoly f = boundary_trace(random_poly(d, p, rng), p);
            SimplexPoly mf = boundary_sum_lift(f, p);
            for (int node = 0; node <= d; ++node) {
                auto x = simplex_node(d, node);
                row.worst = std::max(row.worst,
                                     std::fabs(mf.eval(x) - double(d) * f.value_at_node(node)));
            }
        }
        rows.push_back(row);
    }

    // 3. scaling on joined simplices + telescoping annihilation
    for (int d : ds) {
        if (d < 2) continue;
        SuiteRow scal;
        scal.name = "zero_k_scaling d=" + std::to_string(d);
        scal.tol = 1e-10;
        SuiteRow tele;
        tele.name = "telescoping d=" + std::to_string(d);
        tele.tol = 1e-9;
        const int p = 3;
        BoundaryPoly cur = boundary_trace(random_poly(d, p, rng), p);
        for (int k = 0; k <= d - 1; ++k) {
            double ck = opt.ck_scale / double(d - k);
            if (k == opt.ck_flip) ck = -ck;
            SimplexPoly m = boundary_sum_lift(cur, p);
            BoundaryPoly rm = boundary_trace(m, p);
            rm *= ck;
            cur -= rm;
            if (k <= d - 2) {
                SimplexPoly mcur = boundary_sum_lift(cur, p);
                for (const SubSimplex& sp : subsimplices(d, k + 1)) {
                    for (int it = 0; it < 20; ++it) {
                        std::vector<double> t(sp.k());
                        double rem = 1.0;
                        for (auto& ti : t) {
                            ti = rng.next_real(0.0, rem);
                            rem -= ti;
                        }
                        auto x = sp.param(t);
                        double fv = 0.0;
                        for (int fi = 0; fi <= d; ++fi) {
                            SubSimplex g = facet(d, fi);
                            if (!g.contains(sp)) continue;
                            auto inv = param_pseudo_inverse(g);
                            std::vector<double> tf(d - 1);
                            for (int a = 0; a < d - 1; ++a) tf[a] = inv[a].eval(x);
                            fv = cur.face[fi].eval(tf);
                            break;
                        }
                        scal.worst =
                            std::max(scal.worst, std::fabs(mcur.eval(x) - double(d - k - 1) * fv));
                    }
                }
            }
        }
        for (int i = 0; i <= d; ++i) tele.worst = std::max(tele.worst, cur.face[i].max_abs_coeff());
        rows.push_back(scal);
        rows.push_back(tele);
    }

    // 4. combined lift trace residual
    for (int d : ds) {
        SuiteRow row;
        row.name = "combined_trace d=" + std::to_string(d);
        row.tol = 1e-10;
        for (int p : {1, 3}) {
            BoundaryPoly f = boundary_trace(random_poly(d, p, rng), p);
            SimplexPoly lifted = combined_lift(f, p, opt.ck_scale, opt.ck_flip);
            row.worst = std::max(row.worst, boundary_trace_residual(lifted, f, 200, rng));
        }
        rows.push_back(row);
    }

    // 5. projection property of the degree reduction
    for (int d : ds) {
        SuiteRow row;
        row.name = "projection d=" + std::to_string(d);
        row.tol = 1e-9;
        for (int p : ps) {
            if (identity_case_skipped(d, p)) continue;
            SimplexPoly f = random_poly(d, p, rng).with_degree(p + 2);
            SimplexPoly r = degree_reduce(f, p);
            SimplexPoly diff = r - f.with_degree(p + 2);
            row.worst = std::max(row.worst, diff.max_abs_coeff());
        }
        rows.push_back(row);
    }

    // 6. trace locality (behavioral determinacy, d = 2)
    if (opt.d_only == 0 || opt.d_only == 2) {
        SuiteRow row;
        row.name = "trace_locality d=2";
        row.tol = 1e-9;
        const int p = 3;
        SimplexPoly f = random_poly(2, p + 2, rng);
        SimplexPoly bump = SimplexPoly::affine(2, 1.0, {-1.0, -1.0}) * random_poly(2, p + 1, rng);
        SimplexPoly f2 = f + bump.with_degree(p + 2);
        SimplexPoly r1 = degree_reduce(f, p);
        SimplexPoly r2 = degree_reduce(f2, p);
        SubSimplex hyp = facet(2, 0);
        for (int it = 0; it < 50; ++it) {
            std::vector<double> t{rng.next_unit()};
            auto x = hyp.param(t);
            row.worst = std::max(row.worst, std::fabs(r1.eval(x) - r2.eval(x)));
        }
        rows.push_back(row);
    }

    // 7. elementwise reduction: continuity and boundary values on a small mesh
    if (opt.d_only == 0 || opt.d_only == 2) {
        SuiteRow row;
        row.name = "elementwise_continuity";
        row.tol = 1e-9;
        const int p = (opt.p_only >= 1 && opt.p_only <= 4) ? std::min(opt.p_only, 2) : 2;
        Mesh mesh = make_uniform_mesh(3);
        // continuous degree-(p+2) spline vanishing on the boundary: a degree
        // p+2 conforming basis function at an interior dof
        DofMap dm = build_dofmap(mesh, p + 2);
        std::vector<double> coef(dm.n_interior, 0.0);
        coef[dm.n_interior / 2] = 1.0;
        SplineField input = spline_from_fem(mesh, dm, coef);
        SplineField out = elementwise_reduce(input, p);
        row.worst = std::max(spline_continuity_defect(out, 20), spline_boundary_defect(out));
        rows.push_back(row);
    }

    // 8. dual-basis duality residual
    {
        SuiteRow row;
        row.name = "duality";
        row.tol = 1e-10;
        for (int p : ps) {
            if (p > 6) continue;
            row.worst = std::max(row.worst, dual_stability_probe(p, 2).duality_residual);
        }
        rows.push_back(row);
    }

    // documented skips, surfaced as rows
    for (int d : ds)
        for (int p : ps)
            if (identity_case_skipped(d, p))
                rows.push_back({"case d=" + std::to_string(d) + " p=" + std::to_string(p), 0.0, 0.0,
                                true, "conditioning ceiling (declared): skipped"});
    return rows;
}

inline bool suite_passed(const std::vector<SuiteRow>& rows) {
    for (const auto& r : rows)
        if (!r.pass()) return false;
    return true;
}

}  // namespace hgraded
