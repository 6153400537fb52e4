#pragma once
//
// Project : hgraded
// Module  : simplex_poly.hpp
// Purpose : multivariate polynomials on the reference d-simplex
//           T^d = { x in [0,1]^d : |x|_1 <= 1 }, dense monomial coefficients.
//
// All algebra is exact up to rounding; L2 inner products over T^d use the
// closed form  int_{T^d} x^q dx = (prod q_i!) / (|q| + d)!  and are therefore
// quadrature-free. Conditioning of the monomial representation is acceptable
// for degrees <= 8 at 64-bit precision (documented ceiling).
//

#include <cmath>
#include <vector>

#include "common.hpp"
#include "multi_index.hpp"

namespace hgraded {

class SimplexPoly {
  public:
    SimplexPoly() : dim_(0), deg_(0), c_(1, 0.0) {}

    SimplexPoly(int dim, int deg) : dim_(dim), deg_(deg) {
        c_.assign(monomial_basis(dim, deg).size(), 0.0);
    }

    static SimplexPoly constant(int dim, double value) {
        SimplexPoly p(dim, 0);
        p.c_[0] = value;
        return p;
    }

    // coordinate function x_i
    static SimplexPoly coordinate(int dim, int i) {
        SimplexPoly p(dim, 1);
        MultiIndex q(dim, 0);
        q[i] = 1;
        p.set(q, 1.0);
        return p;
    }

    // affine  a0 + sum_i a[i] x_i
    static SimplexPoly affine(int dim, double a0, const std::vector<double>& a) {
        SimplexPoly p(dim, 1);
        MultiIndex q(dim, 0);
        p.set(q, a0);
        for (int i = 0; i < dim; ++i) {
            q[i] = 1;
            p.set(q, a[i]);
            q[i] = 0;
        }
        return p;
    }

    int dim() const { return dim_; }
    int degree() const { return deg_; }
    const std::vector<double>& coeffs() const { return c_; }
    const MonomialBasis& basis() const { return monomial_basis(dim_, deg_); }

    double get(const MultiIndex& q) const {
        int r = basis().rank(q);
        return r < 0 ? 0.0 : c_[r];
    }

    void set(const MultiIndex& q, double v) {
        int r = basis().rank(q);
        if (r < 0) throw numeric_error("SimplexPoly::set: index beyond degree");
        c_[r] = v;
    }

    void add_to(const MultiIndex& q, double v) {
        int r = basis().rank(q);
        if (r < 0) throw numeric_error("SimplexPoly::add_to: index beyond degree");
        c_[r] += v;
    }

    // Smallest degree bound that actually carries a nonzero coefficient.
    int effective_degree() const {
        const auto& b = basis();
        int d = 0;
        for (int i = 0; i < b.size(); ++i)
            if (c_[i] != 0.0) d = std::max(d, mi_total(b.list[i]));
        return d;
    }

    // Re-embed with a new degree bound (must hold all nonzero terms).
    SimplexPoly with_degree(int deg) const {
        SimplexPoly out(dim_, deg);
        const auto& b = basis();
        for (int i = 0; i < b.size(); ++i) {
            if (c_[i] == 0.0) continue;
            out.add_to(b.list[i], c_[i]);
        }
        return out;
    }

    double eval(const std::vector<double>& x) const {
        const auto& b = basis();
        // per-variable power cache
        std::vector<std::vector<double>> pw(dim_);
        for (int i = 0; i < dim_; ++i) {
            pw[i].resize(deg_ + 1);
            pw[i][0] = 1.0;
            for (int e = 1; e <= deg_; ++e) pw[i][e] = pw[i][e - 1] * x[i];
        }
        double s = 0.0;
        for (int r = 0; r < b.size(); ++r) {
            if (c_[r] == 0.0) continue;
            double t = c_[r];
            const MultiIndex& q = b.list[r];
            for (int i = 0; i < dim_; ++i) t *= pw[i][q[i]];
            s += t;
        }
        return s;
    }

    SimplexPoly& operator+=(const SimplexPoly& g) {
        check_same(g);
        if (g.deg_ > deg_) *this = with_degree(g.deg_);
        const auto& gb = g.basis();
        for (int i = 0; i < gb.size(); ++i)
            if (g.c_[i] != 0.0) add_to(gb.list[i], g.c_[i]);
        return *this;
    }

    SimplexPoly& operator-=(const SimplexPoly& g) {
        check_same(g);
        if (g.deg_ > deg_) *this = with_degree(g.deg_);
        const auto& gb = g.basis();
        for (int i = 0; i < gb.size(); ++i)
            if (g.c_[i] != 0.0) add_to(gb.list[i], -g.c_[i]);
        return *this;
    }

    SimplexPoly& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }

    friend SimplexPoly operator+(SimplexPoly a, const SimplexPoly& b) { return a += b; }
    friend SimplexPoly operator-(SimplexPoly a, const SimplexPoly& b) { return a -= b; }
    friend SimplexPoly operator*(double s, SimplexPoly a) { return a *= s; }

    friend SimplexPoly operator*(const SimplexPoly& a, const SimplexPoly& b) {
        a.check_same(b);
        SimplexPoly out(a.dim_, a.deg_ + b.deg_);
        const auto& ab = a.basis();
        const auto& bb = b.basis();
        MultiIndex q(a.dim_, 0);
        for (int i = 0; i < ab.size(); ++i) {
            if (a.c_[i] == 0.0) continue;
            for (int j = 0; j < bb.size(); ++j) {
                if (b.c_[j] == 0.0) continue;
                for (int k = 0; k < a.dim_; ++k) q[k] = ab.list[i][k] + bb.list[j][k];
                out.add_to(q, a.c_[i] * b.c_[j]);
            }
        }
        return out;
    }

    SimplexPoly pow(int e) const {
        SimplexPoly out = constant(dim_, 1.0);
        for (int k = 0; k < e; ++k) out = out * (*this);
        return out;
    }

    // d/dx_i
    SimplexPoly derivative(int i) const {
        SimplexPoly out(dim_, std::max(0, deg_ - 1));
        const auto& b = basis();
        MultiIndex q(dim_, 0);
        for (int r = 0; r < b.size(); ++r) {
            if (c_[r] == 0.0 || b.list[r][i] == 0) continue;
            q = b.list[r];
            int e = q[i];
            q[i] = e - 1;
            out.add_to(q, c_[r] * double(e));
        }
        return out;
    }

    // Substitution: result(t) = f(args[0](t), ..., args[dim-1](t)).
    // All args share one target dimension; typical use is affine change of
    // variables, where the total degree is preserved.
    SimplexPoly compose(const std::vector<SimplexPoly>& args) const {
        if (int(args.size()) != dim_) throw numeric_error("compose: wrong argument count");
        int tdim = dim_ == 0 ? 0 : args[0].dim();
        int adeg = 0;
        for (const auto& g : args) {
            if (g.dim() != tdim) throw numeric_error("compose: mixed argument dimensions");
            adeg = std::max(adeg, g.degree());
        }
        if (dim_ == 0) {
            // constants: args ignored but the caller may still want a target dim
            return constant(tdim, c_[0]);
        }
        SimplexPoly out(tdim, deg_ * std::max(1, adeg));
        // power caches per variable
        std::vector<std::vector<SimplexPoly>> pw(dim_);
        const auto& b = basis();
        std::vector<int> maxe(dim_, 0);
        for (int r = 0; r < b.size(); ++r)
            if (c_[r] != 0.0)
                for (int i = 0; i < dim_; ++i) maxe[i] = std::max(maxe[i], b.list[r][i]);
        for (int i = 0; i < dim_; ++i) {
            pw[i].push_back(constant(tdim, 1.0));
            for (int e = 1; e <= maxe[i]; ++e) pw[i].push_back(pw[i][e - 1] * args[i]);
        }
        for (int r = 0; r < b.size(); ++r) {
            if (c_[r] == 0.0) continue;
            SimplexPoly term = constant(tdim, c_[r]);
            for (int i = 0; i < dim_; ++i)
                if (b.list[r][i] > 0) term = term * pw[i][b.list[r][i]];
            out += term;
        }
        return out;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::fabs(v));
        return m;
    }

  private:
    void check_same(const SimplexPoly& g) const {
        if (g.dim_ != dim_) throw numeric_error("SimplexPoly: dimension mismatch");
    }

    int dim_;
    int deg_;
    std::vector<double> c_;
};

// (prod q_i!) / (|q| + d)! in extended precision; the monomial-basis inner
// products cancel heavily for high degrees, so the accumulation core runs in
// long double throughout.
inline long double simplex_monomial_integral_ld(const MultiIndex& q, int dim) {
    static const int kMax = 80;
    static long double fact[kMax + 1];
    static bool init = false;
    if (!init) {
        fact[0] = 1.0L;
        for (int i = 1; i <= kMax; ++i) fact[i] = fact[i - 1] * (long double)(i);
        init = true;
    }
    long double num = 1.0L;
    int tot = 0;
    for (int e : q) {
        num *= fact[e];
        tot += e;
    }
    return num / fact[tot + dim];
}

// int_{T^d} x^q dx = (prod q_i!) / (|q| + d)!
inline double simplex_monomial_integral(const MultiIndex& q, int dim) {
    return double(simplex_monomial_integral_ld(q, dim));
}

inline double simplex_integral(const SimplexPoly& f) {
    const auto& b = f.basis();
    long double s = 0.0L;
    for (int r = 0; r < b.size(); ++r)
        if (f.coeffs()[r] != 0.0)
            s += (long double)f.coeffs()[r] * simplex_monomial_integral_ld(b.list[r], f.dim());
    return double(s);
}

// L2(T^d) inner product, exact up to extended-precision rounding.
inline double simplex_inner(const SimplexPoly& f, const SimplexPoly& g) {
    if (f.dim() != g.dim()) throw numeric_error("simplex_inner: dimension mismatch");
    const auto& fb = f.basis();
    const auto& gb = g.basis();
    MultiIndex q(f.dim(), 0);
    long double s = 0.0L;
    for (int i = 0; i < fb.size(); ++i) {
        if (f.coeffs()[i] == 0.0) continue;
        for (int j = 0; j < gb.size(); ++j) {
            if (g.coeffs()[j] == 0.0) continue;
            for (int k = 0; k < f.dim(); ++k) q[k] = fb.list[i][k] + gb.list[j][k];
            s += (long double)f.coeffs()[i] * (long double)g.coeffs()[j] *
                 simplex_monomial_integral_ld(q, f.dim());
        }
    }
    return double(s);
}

inline double simplex_l2_norm(const SimplexPoly& f) {
    return std::sqrt(std::max(0.0, simplex_inner(f, f)));
}

}  // namespace hgraded
