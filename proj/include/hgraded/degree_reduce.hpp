#pragma once
//
// Project : hgraded
// Module  : degree_reduce.hpp
// Purpose : degree reduction P_{p+2}(T^d) -> P_p(T^d) whose traces on
//           subsimplices depend only on the input traces
//
// Construction (induction on d): facet data g|_G = reduce_{d-1}(f o gamma) o
// gamma^{-1}, G = combined boundary lifting of g, output = G + P(f - G) with P
// the L2-orthogonal projection onto the zero-trace subspace
// P^0_p = bubble * P_{p-d-1} (bubble = product of barycentric coordinates).
// Base case d = 1 uses the exact node values as facet data.
//

#include <cmath>
#include <vector>

#include "common.hpp"
#include "lifting.hpp"
#include "simplex_poly.hpp"
#include "subsimplex.hpp"

namespace hgraded {

// Basis of the zero-trace subspace P^0_p(T^d); empty when p < d+1.
inline std::vector<SimplexPoly> bubble_basis(int dim, int p) {
    std::vector<SimplexPoly> out;
    if (p < dim + 1) return out;
    // bubble = lambda_0 ... lambda_d = (1 - sum x_i) * prod x_i
    SimplexPoly bubble = SimplexPoly::affine(dim, 1.0, std::vector<double>(dim, -1.0));
    for (int i = 0; i < dim; ++i) bubble = bubble * SimplexPoly::coordinate(dim, i);
    const auto& basis = monomial_basis(dim, p - dim - 1);
    for (const MultiIndex& q : basis.list) {
        SimplexPoly m(dim, p - dim - 1);
        m.set(q, 1.0);
        out.push_back((bubble * m).with_degree(p));
    }
    return out;
}

namespace detail {

// Extended-precision workspace for the L2 projections. The monomial basis is
// badly conditioned at higher degrees, so Gram-Schmidt and the projection sums
// run on long double coefficient vectors against the exact moment matrix.
struct LdProjector {
    int dim;
    int deg;  // coefficient space = monomials of total degree <= deg
    const MonomialBasis* basis;
    std::vector<std::vector<long double>> moments;  // <x^qi, x^qj>_{L2(T^d)}

    LdProjector(int d, int degree) : dim(d), deg(degree), basis(&monomial_basis(d, degree)) {
        const int m = basis->size();
        MultiIndex q(dim, 0);
        moments.assign(m, std::vector<long double>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= i; ++j) {
                for (int k = 0; k < dim; ++k) q[k] = basis->list[i][k] + basis->list[j][k];
                moments[i][j] = moments[j][i] = simplex_monomial_integral_ld(q, dim);
            }
    }

    std::vector<long double> to_ld(const SimplexPoly& f) const {
        std::vector<long double> v(basis->size(), 0.0L);
        const auto& fb = f.basis();
        for (int i = 0; i < fb.size(); ++i) {
            if (f.coeffs()[i] == 0.0) continue;
            int r = basis->rank(fb.list[i]);
            if (r < 0) throw numeric_error("LdProjector: input degree too large");
            v[r] = f.coeffs()[i];
        }
        return v;
    }

    SimplexPoly to_poly(const std::vector<long double>& v, int out_deg) const {
        SimplexPoly out(dim, out_deg);
        for (int i = 0; i < basis->size(); ++i) {
            if (v[i] == 0.0L) continue;
            if (mi_total(basis->list[i]) > out_deg) {
                if (std::fabs(double(v[i])) > 1e-9)
                    throw numeric_error("LdProjector: unexpected high-degree coefficient");
                continue;
            }
            out.set(basis->list[i], double(v[i]));
        }
        return out;
    }

    long double inner(const std::vector<long double>& a, const std::vector<long double>& b) const {
        long double s = 0.0L;
        const int m = basis->size();
        for (int i = 0; i < m; ++i) {
            if (a[i] == 0.0L) continue;
            long double row = 0.0L;
            const auto& mi = moments[i];
            for (int j = 0; j < m; ++j) row += mi[j] * b[j];
            s += a[i] * row;
        }
        return s;
    }

    // Modified Gram-Schmidt with one reorthogonalization pass.
    std::vector<std::vector<long double>> orthonormalize(std::vector<std::vector<long double>> vs) const {
        std::vector<std::vector<long double>> q;
        for (auto& v : vs) {
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& e : q) {
                    long double c = inner(v, e);
                    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * e[k];
                }
            long double nrm = sqrtl(inner(v, v));
            if (!(nrm > 1e-18L)) throw numeric_error("orthonormalize: basis numerically dependent");
            for (auto& vk : v) vk /= nrm;
            q.push_back(std::move(v));
        }
        return q;
    }
};

}  // namespace detail

// L2(T^d)-orthogonal projection onto P^0_p(T^d).
inline SimplexPoly homogeneous_project(const SimplexPoly& f, int p) {
    const int d = f.dim();
    auto basis = bubble_basis(d, p);
    if (basis.empty()) return SimplexPoly(d, p);
    detail::LdProjector proj(d, std::max(f.degree(), p));
    std::vector<std::vector<long double>> vs;
    vs.reserve(basis.size());
    for (const auto& b : basis) vs.push_back(proj.to_ld(b));
    auto q = proj.orthonormalize(std::move(vs));
    auto fv = proj.to_ld(f);
    std::vector<long double> out(fv.size(), 0.0L);
    for (const auto& e : q) {
        long double c = proj.inner(fv, e);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * e[k];
    }
    return proj.to_poly(out, p);
}

// Degree reduction J^p : P_{p+2}(T^d) -> P_p(T^d). Projection on P_p; traces
// on subsimplices depend only on the input's traces there. Documented degree
// ceiling p <= 8 (monomial-basis conditioning at 64-bit precision).
inline SimplexPoly degree_reduce(const SimplexPoly& f, int p) {
    const int d = f.dim();
    if (d < 1) throw numeric_error("degree_reduce: dimension must be >= 1");
    if (p < 1 || p > 8) throw numeric_error("degree_reduce: p out of supported range (1..8)");
    if (f.effective_degree() > p + 2) throw numeric_error("degree_reduce: input degree exceeds p+2");

    BoundaryPoly g(d, p);
    if (d == 1) {
        g.face[0] = SimplexPoly::constant(0, f.eval({1.0}));  // facet omitting node 0 = {1}
        g.face[1] = SimplexPoly::constant(0, f.eval({0.0}));  // facet omitting node 1 = {0}
    } else {
        for (int i = 0; i <= d; ++i) {
            SubSimplex gi = facet(d, i);
            SimplexPoly fi = f.compose(param_polys(gi));  // (d-1)-variate, degree <= p+2
            g.face[i] = degree_reduce(fi, p);
        }
    }
    SimplexPoly lifted = combined_lift(g, p);
    SimplexPoly residual = f;
    residual -= lifted;
    return lifted + homogeneous_project(residual, p);
}

// Distance in L2(T^d) from f to P_p (least squares via an orthonormalized
// basis); used to measure the quasi-optimality constant of degree_reduce.
inline double best_l2_approx_error(const SimplexPoly& f, int p) {
    const int d = f.dim();
    detail::LdProjector proj(d, std::max(f.degree(), p));
    std::vector<std::vector<long double>> vs;
    for (const MultiIndex& qq : monomial_basis(d, p).list) {
        SimplexPoly m(d, p);
        m.set(qq, 1.0);
        vs.push_back(proj.to_ld(m));
    }
    auto q = proj.orthonormalize(std::move(vs));
    auto res = proj.to_ld(f);
    for (const auto& e : q) {
        long double c = proj.inner(res, e);
        for (std::size_t k = 0; k < res.size(); ++k) res[k] -= c * e[k];
    }
    return double(sqrtl(std::max(0.0L, proj.inner(res, res))));
}

}  // namespace hgraded
