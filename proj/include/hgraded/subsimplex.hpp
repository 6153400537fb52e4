#pragma once
//
// Project : hgraded
// Module  : subsimplex.hpp
// Purpose : k-subsimplices of the reference simplex T^d with canonical affine
//           parametrizations (nodes ordered by ascending node id)
//
// Nodes of T^d carry ids 0..d: node 0 is the origin, node i is e_i.
//

#include <algorithm>
#include <vector>

#include "common.hpp"
#include "simplex_poly.hpp"

namespace hgraded {

inline std::vector<double> simplex_node(int dim, int id) {
    std::vector<double> x(dim, 0.0);
    if (id > 0) x[id - 1] = 1.0;
    return x;
}

// Convex hull of k+1 distinct nodes; parametrized by
//   sigma(t) = N_0 + sum_i t_i (N_i - N_0),  t in T^k,
// with N_0 < N_1 < ... < N_k by node id.
struct SubSimplex {
    int dim = 0;                // ambient dimension d
    std::vector<int> node_ids;  // sorted ascending, size k+1

    int k() const { return int(node_ids.size()) - 1; }

    std::vector<double> node(int i) const { return simplex_node(dim, node_ids[i]); }

    // sigma(t): maps T^k -> ambient simplex
    std::vector<double> param(const std::vector<double>& t) const {
        std::vector<double> n0 = node(0);
        std::vector<double> x = n0;
        for (int i = 1; i <= k(); ++i) {
            auto ni = node(i);
            for (int j = 0; j < dim; ++j) x[j] += t[i - 1] * (ni[j] - n0[j]);
        }
        return x;
    }

    bool contains_node(int id) const {
        return std::find(node_ids.begin(), node_ids.end(), id) != node_ids.end();
    }

    bool contains(const SubSimplex& other) const {
        for (int id : other.node_ids)
            if (!contains_node(id)) return false;
        return true;
    }
};

inline SubSimplex make_subsimplex(int dim, std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i)
        if (ids[i] == ids[i - 1]) throw numeric_error("SubSimplex: duplicate node ids");
    SubSimplex s;
    s.dim = dim;
    s.node_ids = std::move(ids);
    return s;
}

// The d+1 facets of T^d; facet i omits node i.
inline SubSimplex facet(int dim, int omitted) {
    std::vector<int> ids;
    for (int j = 0; j <= dim; ++j)
        if (j != omitted) ids.push_back(j);
    return make_subsimplex(dim, std::move(ids));
}

// All k-subsimplices of T^d.
inline std::vector<SubSimplex> subsimplices(int dim, int k) {
    std::vector<SubSimplex> out;
    std::vector<int> pick;
    // enumerate (k+1)-subsets of {0..dim} in lex order
    std::vector<int> idx(k + 1);
    for (int i = 0; i <= k; ++i) idx[i] = i;
    while (true) {
        out.push_back(make_subsimplex(dim, idx));
        int i = k;
        while (i >= 0 && idx[i] == dim - (k - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j <= k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

// Coordinate polynomials of sigma: ambient coordinate j as an affine poly in t.
inline std::vector<SimplexPoly> param_polys(const SubSimplex& s) {
    const int kk = s.k();
    std::vector<SimplexPoly> out;
    auto n0 = s.node(0);
    for (int j = 0; j < s.dim; ++j) {
        std::vector<double> lin(kk, 0.0);
        for (int i = 1; i <= kk; ++i) lin[i - 1] = s.node(i)[j] - n0[j];
        out.push_back(SimplexPoly::affine(kk, n0[j], lin));
    }
    return out;
}

// Left inverse of sigma on its affine hull:  lambda(y) = (E^T E)^{-1} E^T (y - N_0),
// returned as k affine polynomials in the ambient variables.
inline std::vector<SimplexPoly> param_pseudo_inverse(const SubSimplex& s) {
    const int kk = s.k();
    const int d = s.dim;
    auto n0 = s.node(0);
    // E columns: N_i - N_0 (d x k); G = E^T E (k x k)
    std::vector<std::vector<double>> E(d, std::vector<double>(kk, 0.0));
    for (int i = 1; i <= kk; ++i) {
        auto ni = s.node(i);
        for (int j = 0; j < d; ++j) E[j][i - 1] = ni[j] - n0[j];
    }
    std::vector<std::vector<double>> G(kk, std::vector<double>(kk, 0.0));
    for (int a = 0; a < kk; ++a)
        for (int b = 0; b < kk; ++b)
            for (int j = 0; j < d; ++j) G[a][b] += E[j][a] * E[j][b];
    // invert G by Gauss-Jordan (tiny, well conditioned: entries in {1/2,1})
    std::vector<std::vector<double>> Gi(kk, std::vector<double>(kk, 0.0));
    for (int a = 0; a < kk; ++a) Gi[a][a] = 1.0;
    for (int col = 0; col < kk; ++col) {
        int piv = col;
        for (int rr = col + 1; rr < kk; ++rr)
            if (std::fabs(G[rr][col]) > std::fabs(G[piv][col])) piv = rr;
        std::swap(G[piv], G[col]);
        std::swap(Gi[piv], Gi[col]);
        double dinv = 1.0 / G[col][col];
        for (int cc = 0; cc < kk; ++cc) {
            G[col][cc] *= dinv;
            Gi[col][cc] *= dinv;
        }
        for (int rr = 0; rr < kk; ++rr) {
            if (rr == col) continue;
            double f = G[rr][col];
            if (f == 0.0) continue;
            for (int cc = 0; cc < kk; ++cc) {
                G[rr][cc] -= f * G[col][cc];
                Gi[rr][cc] -= f * Gi[col][cc];
            }
        }
    }
    // row a of (G^{-1} E^T): affine t_a(y) = sum_j M[a][j] (y_j - n0_j)
    std::vector<SimplexPoly> out;
    for (int a = 0; a < kk; ++a) {
        std::vector<double> lin(d, 0.0);
        double a0 = 0.0;
        for (int j = 0; j < d; ++j) {
            double m = 0.0;
            for (int b = 0; b < kk; ++b) m += Gi[a][b] * E[j][b];
            lin[j] = m;
            a0 -= m * n0[j];
        }
        out.push_back(SimplexPoly::affine(d, a0, lin));
    }
    return out;
}

// C1 = sqrt(det Gram(N_i - N_0)) for a facet (surface measure factor).
inline double facet_measure_factor(const SubSimplex& s) {
    const int kk = s.k();
    if (kk == 0) return 1.0;
    const int d = s.dim;
    auto n0 = s.node(0);
    std::vector<std::vector<double>> E(d, std::vector<double>(kk, 0.0));
    for (int i = 1; i <= kk; ++i) {
        auto ni = s.node(i);
        for (int j = 0; j < d; ++j) E[j][i - 1] = ni[j] - n0[j];
    }
    std::vector<std::vector<double>> G(kk, std::vector<double>(kk, 0.0));
    for (int a = 0; a < kk; ++a)
        for (int b = 0; b < kk; ++b)
            for (int j = 0; j < d; ++j) G[a][b] += E[j][a] * E[j][b];
    // determinant by elimination
    double det = 1.0;
    for (int col = 0; col < kk; ++col) {
        int piv = col;
        for (int rr = col + 1; rr < kk; ++rr)
            if (std::fabs(G[rr][col]) > std::fabs(G[piv][col])) piv = rr;
        if (piv != col) {
            std::swap(G[piv], G[col]);
            det = -det;
        }
        det *= G[col][col];
        for (int rr = col + 1; rr < kk; ++rr) {
            double f = G[rr][col] / G[col][col];
            for (int cc = col; cc < kk; ++cc) G[rr][cc] -= f * G[col][cc];
        }
    }
    return std::sqrt(std::fabs(det));
}

}  // namespace hgraded
