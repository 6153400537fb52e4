#pragma once
//
// Project : hgraded
// Module  : assemble.hpp
// Purpose : Galerkin stiffness/load assembly for
//             a(u,v) = (a1 grad u, grad v) + (a2 . grad u, v) + (a3 u, v)
//           with degree-p Bernstein elements and homogeneous Dirichlet
//           conditions (boundary dofs eliminated)
//
// Convention: A[m][n] = a(phi_n, phi_m) -- row = test function. Quadrature is
// exact for polynomial integrands of degree 2p+2, so constant-coefficient
// assembly is exact. Element loop is sequential in element order, which makes
// the accumulation deterministic.
//

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "bernstein.hpp"
#include "common.hpp"
#include "dense.hpp"
#include "dofmap.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "sparse.hpp"

namespace hgraded {

using Matrix2 = std::array<double, 4>;  // row-major 2x2

struct Coefficients {
    std::function<Matrix2(Vec2)> a1;
    std::function<Vec2(Vec2)> a2;
    std::function<double(Vec2)> a3;
    double alpha1 = 1.0;  // coercivity lower bound of a1

    static Coefficients laplace() {
        Coefficients c;
        c.a1 = [](Vec2) { return Matrix2{1.0, 0.0, 0.0, 1.0}; };
        c.a2 = [](Vec2) { return Vec2{0.0, 0.0}; };
        c.a3 = [](Vec2) { return 0.0; };
        c.alpha1 = 1.0;
        return c;
    }

    static Coefficients convection_diffusion() {
        Coefficients c;
        c.a1 = [](Vec2) { return Matrix2{1.0, 0.0, 0.0, 1.0}; };
        c.a2 = [](Vec2) { return Vec2{0.5, 0.5}; };
        c.a3 = [](Vec2) { return 1.0; };
        c.alpha1 = 1.0;
        return c;
    }
};

// Spot-check of the coercivity hypothesis y^T a1(x) y >= alpha1 |y|^2.
inline void validate_coefficients(const Coefficients& c, int samples = 64) {
    Rng rng(2024);
    for (int it = 0; it < samples; ++it) {
        Vec2 x{rng.next_unit(), rng.next_unit()};
        Matrix2 a = c.a1(x);
        Vec2 y{rng.next_real(-1.0, 1.0), rng.next_real(-1.0, 1.0)};
        double quad = a[0] * y.x * y.x + (a[1] + a[2]) * y.x * y.y + a[3] * y.y * y.y;
        double n2 = y.x * y.x + y.y * y.y;
        if (!(std::isfinite(quad)) || quad < c.alpha1 * n2 - 1e-12)
            throw numeric_error("coefficients: a1 fails the coercivity spot check");
    }
}

namespace femdetail {

// per-quadrature-point tables of the local Bernstein basis
struct BasisTables {
    int p;
    TriangleRule rule;
    std::vector<MultiIndex> beta;
    // [q][i] value, [q][i][m] barycentric derivative
    std::vector<std::vector<double>> val;
    std::vector<std::vector<std::array<double, 3>>> dlam;
};

inline BasisTables basis_tables(int p, int quad_degree) {
    BasisTables t;
    t.p = p;
    t.rule = triangle_rule(quad_degree);
    t.beta = bernstein_indices(2, p);
    const int nq = int(t.rule.bary.size());
    const int nb = int(t.beta.size());
    t.val.assign(nq, std::vector<double>(nb));
    t.dlam.assign(nq, std::vector<std::array<double, 3>>(nb));
    for (int q = 0; q < nq; ++q) {
        std::vector<double> lam{t.rule.bary[q][0], t.rule.bary[q][1], t.rule.bary[q][2]};
        for (int i = 0; i < nb; ++i) {
            t.val[q][i] = bernstein_value(t.beta[i], lam);
            for (int m = 0; m < 3; ++m) t.dlam[q][i][m] = bernstein_dlambda(t.beta[i], m, lam);
        }
    }
    return t;
}

}  // namespace femdetail

inline std::pair<SparseMatrix, DofMap> assemble_stiffness(const Mesh& mesh, const Coefficients& coeffs,
                                                          int p) {
    if (p < 1 || p > 4) throw config_error("assemble_stiffness: p in 1..4 required");
    validate_coefficients(coeffs);
    DofMap dm = build_dofmap(mesh, p);
    auto tables = femdetail::basis_tables(p, 2 * p + 2);
    const int nb = int(tables.beta.size());
    const int nq = int(tables.rule.bary.size());

    std::map<std::pair<int, int>, double> acc;
    std::vector<Vec2> grad(nb);
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const Element& el = mesh.elements[t];
        Vec2 a = mesh.vertices[el.v[0]].coords;
        Vec2 b = mesh.vertices[el.v[1]].coords;
        Vec2 c = mesh.vertices[el.v[2]].coords;
        const double two_area = el.twice_area;
        // gradients of barycentric coordinates
        auto perp = [](Vec2 v) { return Vec2{-v.y, v.x}; };
        Vec2 gl0 = (1.0 / two_area) * perp(c - b);
        Vec2 gl1 = (1.0 / two_area) * perp(a - c);
        Vec2 gl2 = (1.0 / two_area) * perp(b - a);
        const auto& table = dm.element_dofs[t];
        for (int q = 0; q < nq; ++q) {
            const auto& bary = tables.rule.bary[q];
            Vec2 x = bary[0] * a + bary[1] * b + bary[2] * c;
            Matrix2 a1 = coeffs.a1(x);
            Vec2 a2 = coeffs.a2(x);
            double a3 = coeffs.a3(x);
            if (!std::isfinite(a1[0]) || !std::isfinite(a1[1]) || !std::isfinite(a1[2]) ||
                !std::isfinite(a1[3]) || !std::isfinite(a2.x) || !std::isfinite(a2.y) ||
                !std::isfinite(a3))
                throw numeric_error("assemble_stiffness: non-finite coefficient value");
            const double w = tables.rule.weights[q] * 0.5 * two_area;
            for (int i = 0; i < nb; ++i) {
                const auto& dl = tables.dlam[q][i];
                grad[i] = dl[0] * gl0 + dl[1] * gl1 + dl[2] * gl2;
            }
            for (int i = 0; i < nb; ++i) {  // test
                int gi = table[i];
                if (gi < 0) continue;
                for (int j = 0; j < nb; ++j) {  // trial
                    int gj = table[j];
                    if (gj < 0) continue;
                    Vec2 flux{a1[0] * grad[j].x + a1[1] * grad[j].y,
                              a1[2] * grad[j].x + a1[3] * grad[j].y};
                    double v = dot(flux, grad[i]) + dot(a2, grad[j]) * tables.val[q][i] +
                               a3 * tables.val[q][j] * tables.val[q][i];
                    acc[{gi, gj}] += w * v;
                }
            }
        }
    }
    return {SparseMatrix(dm.n_interior, acc), std::move(dm)};
}

inline std::vector<double> assemble_load(const Mesh& mesh, const DofMap& dm,
                                         const std::function<double(Vec2)>& f) {
    auto tables = femdetail::basis_tables(dm.p, 2 * dm.p + 2);
    const int nb = int(tables.beta.size());
    const int nq = int(tables.rule.bary.size());
    std::vector<double> rhs(dm.n_interior, 0.0);
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const Element& el = mesh.elements[t];
        Vec2 a = mesh.vertices[el.v[0]].coords;
        Vec2 b = mesh.vertices[el.v[1]].coords;
        Vec2 c = mesh.vertices[el.v[2]].coords;
        const auto& table = dm.element_dofs[t];
        for (int q = 0; q < nq; ++q) {
            const auto& bary = tables.rule.bary[q];
            Vec2 x = bary[0] * a + bary[1] * b + bary[2] * c;
            double fv = f(x);
            if (!std::isfinite(fv)) throw numeric_error("assemble_load: non-finite value");
            const double w = tables.rule.weights[q] * 0.5 * el.twice_area;
            for (int i = 0; i < nb; ++i) {
                int gi = table[i];
                if (gi < 0) continue;
                rhs[gi] += w * fv * tables.val[q][i];
            }
        }
    }
    return rhs;
}

// Standalone variant: derives the (deterministic) dof numbering itself.
inline std::vector<double> assemble_load(const Mesh& mesh, const std::function<double(Vec2)>& f,
                                         int p) {
    return assemble_load(mesh, build_dofmap(mesh, p), f);
}

// Dense LU route for the explicit inverse. Residual is verified with the
// sparse operator (cheap) against a condition-scaled tolerance.
inline DenseMatrix solve_dense_inverse(const SparseMatrix& a, bool check_residual = true) {
    const int n = a.size();
    if (n > kDenseInverseGuard) throw numeric_error("solve_dense_inverse: N exceeds the dense guard");
    LuFactor lu(a.to_dense());
    DenseMatrix inv = lu.inverse();
    if (!inv.all_finite()) throw numeric_error("solve_dense_inverse: non-finite inverse entries");
    if (check_residual) {
        // ||A * inv - I||_max via sparse matvecs over the columns of inv
        double worst = 0.0;
        std::vector<double> col(n), res(n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) col[i] = inv(i, j);
            a.matvec(col.data(), res.data());
            res[j] -= 1.0;
            for (int i = 0; i < n; ++i) worst = std::max(worst, std::fabs(res[i]));
        }
        // condition-scaled tolerance: kappa estimated by 1-norms
        double anorm = 0.0, inorm = 0.0;
        std::vector<double> colsum_a(n, 0.0), colsum_i(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
                colsum_a[a.cols()[k]] += std::fabs(a.vals()[k]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) colsum_i[j] += std::fabs(inv(i, j));
        for (int j = 0; j < n; ++j) {
            anorm = std::max(anorm, colsum_a[j]);
            inorm = std::max(inorm, colsum_i[j]);
        }
        double tol = 1e-8 * std::max(1.0, anorm * inorm);
        if (worst > tol) throw numeric_error("solve_dense_inverse: residual exceeds tolerance");
    }
    return inv;
}

struct FemSolution {
    std::vector<double> u;  // interior dof coefficients
    std::optional<double> l2_error;
};

// Evaluate the discrete solution on one element at barycentric coordinates.
inline double eval_fem_on_element(const Mesh& mesh, const DofMap& dm, const std::vector<double>& u,
                                  int element, const std::vector<double>& lambda) {
    (void)mesh;
    const auto& table = dm.element_dofs[element];
    double s = 0.0;
    for (int li = 0; li < dm.local_count(); ++li) {
        int g = table[li];
        if (g < 0) continue;
        s += u[g] * bernstein_value(dm.local_indices[li], lambda);
    }
    return s;
}

inline FemSolution fem_solve(const Mesh& mesh, const Coefficients& coeffs,
                             const std::function<double(Vec2)>& f, int p,
                             const std::function<double(Vec2)>* reference = nullptr) {
    auto [a, dm] = assemble_stiffness(mesh, coeffs, p);
    auto rhs = assemble_load(mesh, dm, f);
    if (a.size() > 6000) throw numeric_error("fem_solve: direct solver guard exceeded");
    LuFactor lu(a.to_dense());
    FemSolution sol;
    sol.u = rhs;
    lu.solve(sol.u);
    if (reference) {
        TriangleRule rule = triangle_rule(2 * p + 4);
        KahanSum err2;
        for (int t = 0; t < mesh.n_elements(); ++t) {
            const Element& el = mesh.elements[t];
            Vec2 va = mesh.vertices[el.v[0]].coords;
            Vec2 vb = mesh.vertices[el.v[1]].coords;
            Vec2 vc = mesh.vertices[el.v[2]].coords;
            for (std::size_t q = 0; q < rule.bary.size(); ++q) {
                const auto& bary = rule.bary[q];
                Vec2 x = bary[0] * va + bary[1] * vb + bary[2] * vc;
                double uh = eval_fem_on_element(mesh, dm, sol.u, t, {bary[0], bary[1], bary[2]});
                double diff = uh - (*reference)(x);
                err2.add(rule.weights[q] * 0.5 * el.twice_area * diff * diff);
            }
        }
        sol.l2_error = std::sqrt(std::max(0.0, err2.value()));
    }
    return sol;
}

}  // namespace hgraded
