#pragma once
//
// Project : hgraded
// Module  : quadrature.hpp
// Purpose : Grundmann-Moeller rules on the reference d-simplex and symmetric
//           triangle rules for FEM assembly
//

#include <array>
#include <cmath>
#include <vector>

#include "common.hpp"
#include "multi_index.hpp"
#include "simplex_poly.hpp"

namespace hgraded {

// One quadrature node: cartesian coordinates on T^d plus weight.
// Weights sum to vol(T^d) = 1/d!.
struct QuadRule {
    int dim = 0;
    int degree = 0;  // exact for total degree <= degree
    std::vector<std::vector<double>> points;
    std::vector<double> weights;
};

// Grundmann-Moeller rule of exactness degree 2s+1 on T^d.
// Nodes: for i = 0..s and |k|_1 = s-i, k in N_0^{d+1}, barycentric
// (2k_j+1)/(d+1+2(s-i)); weight per group
//   w_i = (-1)^i 2^{-2s} (d+2s+1-2i)^{2s+1} / ( i! (d+2s+1-i)! ).
inline QuadRule grundmann_moeller(int dim, int s) {
    if (dim < 1) throw numeric_error("grundmann_moeller: dim >= 1 required");
    if (s < 0 || s > 40) throw numeric_error("grundmann_moeller: order out of range");
    QuadRule rule;
    rule.dim = dim;
    rule.degree = 2 * s + 1;
    for (int i = 0; i <= s; ++i) {
        const int t = s - i;
        const double denom = double(dim + 1 + 2 * t);
        double w = std::pow(2.0, -2.0 * s) * std::pow(double(dim + 2 * s + 1 - 2 * i), double(2 * s + 1));
        w /= factorial(i) * factorial(dim + 2 * s + 1 - i);
        if (i % 2 == 1) w = -w;
        // enumerate k in N_0^{d+1} with |k| = t
        const auto& basis = monomial_basis(dim + 1, t);
        for (const MultiIndex& k : basis.list) {
            if (mi_total(k) != t) continue;
            std::vector<double> x(dim);
            for (int j = 0; j < dim; ++j) x[j] = (2.0 * k[j + 1] + 1.0) / denom;
            rule.points.push_back(std::move(x));
            rule.weights.push_back(w);
        }
    }
    return rule;
}

// Smallest GM rule exact to at least `degree`.
inline QuadRule simplex_rule(int dim, int degree) {
    int s = std::max(0, (degree - 1 + 1) / 2);  // 2s+1 >= degree
    if (2 * s + 1 < degree) ++s;
    return grundmann_moeller(dim, s);
}

inline double integrate(const QuadRule& rule, const SimplexPoly& f) {
    KahanSum s;
    for (std::size_t i = 0; i < rule.points.size(); ++i) s.add(rule.weights[i] * f.eval(rule.points[i]));
    return s.value();
}

// L2 norm of a polynomial over the reference simplex by Grundmann-Moeller
// quadrature (exact within the rule degree; rule order is capped, degrees
// beyond the cap are rejected).
inline double poly_quadrature_norm(const SimplexPoly& f) {
    QuadRule rule = simplex_rule(f.dim(), 2 * f.degree());
    KahanSum s;
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
        double v = f.eval(rule.points[i]);
        s.add(rule.weights[i] * v * v);
    }
    return std::sqrt(std::max(0.0, s.value()));
}

// Variant over a facet of T^d: f is given in the facet parametrization; the
// surface measure factor sqrt(det E^T E) scales the parameter-domain rule.
// Forward declaration lives in subsimplex.hpp users; implemented there to keep
// include order simple (see lifting.hpp for the norm-law application).

// --- triangle rules for assembly ------------------------------------------
//
// Barycentric nodes (l0,l1,l2) with weights summing to 1; the caller scales by
// the physical element area. Closed-form symmetric rules up to degree 5,
// Grundmann-Moeller beyond.

struct TriangleRule {
    int degree = 0;
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;  // sum to 1
};

inline TriangleRule triangle_rule(int degree) {
    TriangleRule r;
    auto push3 = [&r](double a, double b, double w) {
        // orbit of (a,b,c) under coordinate permutation, c = 1-a-b
        double c = 1.0 - a - b;
        r.bary.push_back({a, b, c});
        r.bary.push_back({b, c, a});
        r.bary.push_back({c, a, b});
        r.weights.push_back(w);
        r.weights.push_back(w);
        r.weights.push_back(w);
    };
    if (degree <= 1) {
        r.degree = 1;
        r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        r.weights.push_back(1.0);
    } else if (degree == 2) {
        r.degree = 2;
        push3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
    } else if (degree == 3) {
        r.degree = 3;
        r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        r.weights.push_back(-27.0 / 48.0);
        push3(0.6, 0.2, 25.0 / 48.0);
    } else if (degree <= 5) {
        r.degree = 5;
        r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        r.weights.push_back(9.0 / 40.0);
        const double s = std::sqrt(15.0);
        push3((6.0 - s) / 21.0, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
        push3((6.0 + s) / 21.0, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
    } else {
        QuadRule gm = simplex_rule(2, degree);
        r.degree = gm.degree;
        for (std::size_t i = 0; i < gm.points.size(); ++i) {
            double x = gm.points[i][0], y = gm.points[i][1];
            r.bary.push_back({1.0 - x - y, x, y});
            r.weights.push_back(gm.weights[i] * 2.0);  // reference area 1/2 -> unit sum
        }
    }
    return r;
}

}  // namespace hgraded
