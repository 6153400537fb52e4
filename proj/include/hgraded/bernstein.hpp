#pragma once
//
// Project : hgraded
// Module  : bernstein.hpp
// Purpose : Bernstein-Bezier shape functions on the reference simplex and the
//           dual-basis stability probe
//
// B_beta(lambda) = (p! / prod beta_i!) lambda^beta, |beta| = p, over the d+1
// barycentric coordinates. Vertex/edge/interior classification of beta gives
// the conforming global space; all inner products use the closed form
// int_T lambda^b = d! |T| (prod b_i!) / (|b| + d)!.
//

#include <array>
#include <cmath>
#include <vector>

#include "common.hpp"
#include "dense.hpp"
#include "multi_index.hpp"

namespace hgraded {

// multi-indices beta in N_0^{d+1} with |beta| = p, in graded-lex order of the
// shared enumeration
inline std::vector<MultiIndex> bernstein_indices(int dim, int p) {
    std::vector<MultiIndex> out;
    for (const MultiIndex& q : monomial_basis(dim + 1, p).list)
        if (mi_total(q) == p) out.push_back(q);
    return out;
}

inline double bernstein_coeff(const MultiIndex& beta) {
    double c = factorial(mi_total(beta));
    for (int b : beta) c /= factorial(b);
    return c;
}

// value of B_beta at barycentric coordinates lambda (size d+1)
inline double bernstein_value(const MultiIndex& beta, const std::vector<double>& lambda) {
    double v = bernstein_coeff(beta);
    for (std::size_t i = 0; i < beta.size(); ++i)
        for (int e = 0; e < beta[i]; ++e) v *= lambda[i];
    return v;
}

// d/dlambda_m of B_beta at lambda
inline double bernstein_dlambda(const MultiIndex& beta, int m, const std::vector<double>& lambda) {
    if (beta[m] == 0) return 0.0;
    double v = bernstein_coeff(beta) * beta[m];
    for (std::size_t i = 0; i < beta.size(); ++i) {
        int e = int(i) == m ? beta[i] - 1 : beta[i];
        for (int k = 0; k < e; ++k) v *= lambda[i];
    }
    return v;
}

// exact Gram of the Bernstein basis on the reference d-simplex
inline DenseMatrix bernstein_gram(int dim, int p) {
    auto idx = bernstein_indices(dim, p);
    const int n = int(idx.size());
    DenseMatrix g(n, n);
    const double ref_vol = 1.0 / factorial(dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            // int lambda^{bi+bj} = d! * vol * prod(b!)/( |b| + d )!
            long double num = 1.0L;
            int tot = 0;
            for (std::size_t k = 0; k < idx[i].size(); ++k) {
                int b = idx[i][k] + idx[j][k];
                num *= (long double)factorial(b);
                tot += b;
            }
            long double integral =
                (long double)factorial(dim) * (long double)ref_vol * num / (long double)factorial(tot + dim);
            double v = bernstein_coeff(idx[i]) * bernstein_coeff(idx[j]) * double(integral);
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

struct DualProbeResult {
    double max_dual_norm = 0.0;   // max_j ||dual_j||_{L2(ref)}
    double duality_residual = 0.0;  // max |<shape_i, dual_j> - delta_ij|
    int dimension = 0;              // number of shape functions
};

// Builds the Bernstein shape functions, forms the dual shape functions by
// inverting the Gram matrix, and reports the worst dual norm. With duals
// expressed as G^{-1} columns, ||dual_j||^2 = (G^{-1})_{jj}.
inline DualProbeResult dual_stability_probe(int p, int dim = 2) {
    if (p < 0 || p > 8) throw config_error("dual_stability_probe: p in 0..8 required");
    DenseMatrix g = bernstein_gram(dim, p);
    const int n = g.rows();
    LuFactor lu(g);
    DenseMatrix ginv = lu.inverse();
    DualProbeResult r;
    r.dimension = n;
    for (int j = 0; j < n; ++j) r.max_dual_norm = std::max(r.max_dual_norm, std::sqrt(ginv(j, j)));
    // duality defect: G * G^{-1} vs identity
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += g(i, k) * ginv(k, j);
            worst = std::max(worst, std::fabs(s - (i == j ? 1.0 : 0.0)));
        }
    r.duality_residual = worst;
    return r;
}

}  // namespace hgraded
