#pragma once
//
// Project : hgraded
// Module  : svd.hpp
// Purpose : one-sided Jacobi SVD and best rank-r truncation
//
// One-sided Jacobi orthogonalizes the columns of the working copy by plane
// rotations (row-cyclic pair order, rotations skipped once a pair is
// numerically orthogonal at the 1e-14 relative threshold). Deterministic:
// fixed pair order, no threading, stable sorting of the singular triplets.
//

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "common.hpp"
#include "dense.hpp"

namespace hgraded {

struct SvdResult {
    // A = U diag(sigma) V^T, U: m x k, V: n x k, k = min(m,n), sigma descending
    DenseMatrix u;
    DenseMatrix v;
    std::vector<double> sigma;
    int sweeps = 0;
};

namespace svddetail {

// columns stored contiguously
struct ColMat {
    int m = 0, n = 0;
    std::vector<double> a;
    ColMat(int rows, int cols) : m(rows), n(cols), a(std::size_t(rows) * cols, 0.0) {}
    double* col(int j) { return a.data() + std::size_t(j) * m; }
    const double* col(int j) const { return a.data() + std::size_t(j) * m; }
};

inline SvdResult onesided_jacobi_tall(const DenseMatrix& mat, double tol, int max_sweeps) {
    const int m = mat.rows(), n = mat.cols();
    ColMat w(m, n), v(n, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) w.col(j)[i] = mat(i, j);
    for (int j = 0; j < n; ++j) v.col(j)[j] = 1.0;

    int sweep = 0;
    std::vector<double> colsq(n);
    for (; sweep < max_sweeps; ++sweep) {
        // refresh the cached column norms once per sweep
        for (int j = 0; j < n; ++j) {
            const double* cj = w.col(j);
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += cj[k] * cj[k];
            colsq[j] = s;
        }
        int rotations = 0;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double* ci = w.col(i);
                double* cj = w.col(j);
                double dij = 0.0;
                for (int k = 0; k < m; ++k) dij += ci[k] * cj[k];
                const double nii = colsq[i], njj = colsq[j];
                if (std::fabs(dij) <= tol * std::sqrt(nii * njj) || nii == 0.0 || njj == 0.0)
                    continue;
                ++rotations;
                double tau = (njj - nii) / (2.0 * dij);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (int k = 0; k < m; ++k) {
                    double wi = ci[k], wj = cj[k];
                    ci[k] = c * wi - s * wj;
                    cj[k] = s * wi + c * wj;
                }
                colsq[i] = c * c * nii - 2.0 * c * s * dij + s * s * njj;
                colsq[j] = s * s * nii + 2.0 * c * s * dij + c * c * njj;
                double* vi = v.col(i);
                double* vj = v.col(j);
                for (int k = 0; k < n; ++k) {
                    double xi = vi[k], xj = vj[k];
                    vi[k] = c * xi - s * xj;
                    vj[k] = s * xi + c * xj;
                }
            }
        }
        if (rotations == 0) break;
    }
    if (sweep >= max_sweeps)
        throw numeric_error("onesided_jacobi: no convergence after " + std::to_string(max_sweeps) +
                            " sweeps");

    std::vector<double> sig(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        const double* cj = w.col(j);
        for (int k = 0; k < m; ++k) s += cj[k] * cj[k];
        sig[j] = std::sqrt(s);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&sig](int a, int b) { return sig[a] > sig[b]; });

    SvdResult r;
    r.sweeps = sweep + 1;
    r.sigma.resize(n);
    r.u = DenseMatrix(m, n);
    r.v = DenseMatrix(n, n);
    for (int jj = 0; jj < n; ++jj) {
        int j = order[jj];
        r.sigma[jj] = sig[j];
        const double* cj = w.col(j);
        if (sig[j] > 0.0) {
            double inv = 1.0 / sig[j];
            for (int k = 0; k < m; ++k) r.u(k, jj) = cj[k] * inv;
        }
        const double* vj = v.col(j);
        for (int k = 0; k < n; ++k) r.v(k, jj) = vj[k];
    }
    return r;
}

}  // namespace svddetail

inline SvdResult svd_onesided(const DenseMatrix& a, double tol = 1e-14, int max_sweeps = 60) {
    if (a.rows() == 0 || a.cols() == 0) throw numeric_error("svd: empty matrix");
    if (a.rows() >= a.cols()) return svddetail::onesided_jacobi_tall(a, tol, max_sweeps);
    DenseMatrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    SvdResult r = svddetail::onesided_jacobi_tall(t, tol, max_sweeps);
    std::swap(r.u, r.v);
    return r;
}

// block = X Y^T with X of width min(r, rank-capacity)
struct LowRankFactor {
    DenseMatrix x;  // |I| x r'
    DenseMatrix y;  // |J| x r'
    int rank() const { return x.cols(); }
};

inline LowRankFactor truncate_svd_result(const SvdResult& s, int r) {
    const int k = int(s.sigma.size());
    const int rr = std::min(r, k);
    LowRankFactor f;
    f.x = DenseMatrix(s.u.rows(), rr);
    f.y = DenseMatrix(s.v.rows(), rr);
    for (int j = 0; j < rr; ++j) {
        for (int i = 0; i < s.u.rows(); ++i) f.x(i, j) = s.u(i, j) * s.sigma[j];
        for (int i = 0; i < s.v.rows(); ++i) f.y(i, j) = s.v(i, j);
    }
    return f;
}

// Best rank-r approximation; truncation error in the spectral norm is
// sigma_{r+1} (0 once r reaches the rank).
inline LowRankFactor truncated_svd(const DenseMatrix& m, int r) {
    if (r < 1) throw config_error("truncated_svd: r >= 1 required");
    return truncate_svd_result(svd_onesided(m), r);
}

}  // namespace hgraded
