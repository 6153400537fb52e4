#pragma once
//
// Project : hgraded
// Module  : dense.hpp
// Purpose : row-major dense matrices, LU with partial pivoting, explicit
//           inverse
//

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "common.hpp"

namespace hgraded {

class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(std::size_t(rows) * std::size_t(cols), fill) {}

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

    double* row(int i) { return a_.data() + std::size_t(i) * cols_; }
    const double* row(int i) const { return a_.data() + std::size_t(i) * cols_; }

    std::vector<double>& data() { return a_; }
    const std::vector<double>& data() const { return a_; }

    void matvec(const double* x, double* y) const {
        for (int i = 0; i < rows_; ++i) {
            const double* r = row(i);
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += r[j] * x[j];
            y[i] = s;
        }
    }

    void matvec_transposed(const double* x, double* y) const {
        for (int j = 0; j < cols_; ++j) y[j] = 0.0;
        for (int i = 0; i < rows_; ++i) {
            const double* r = row(i);
            const double xi = x[i];
            if (xi == 0.0) continue;
            for (int j = 0; j < cols_; ++j) y[j] += xi * r[j];
        }
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::fabs(v));
        return m;
    }

    bool all_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

// LU factorization with partial pivoting, kept as combined L\U plus the pivot
// sequence. The pivot order is a deterministic function of the entries.
class LuFactor {
  public:
    explicit LuFactor(DenseMatrix a) : lu_(std::move(a)) {
        const int n = lu_.rows();
        if (lu_.cols() != n) throw numeric_error("LU: matrix must be square");
        piv_.resize(n);
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::fabs(lu_(k, k));
            for (int i = k + 1; i < n; ++i) {
                double v = std::fabs(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (!(best > 0.0) || !std::isfinite(best))
                throw numeric_error("LU: singular pivot at index " + std::to_string(k));
            piv_[k] = p;
            if (p != k)
                for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            const double dinv = 1.0 / lu_(k, k);
            const double* rk = lu_.row(k);
            for (int i = k + 1; i < n; ++i) {
                double* ri = lu_.row(i);
                double l = ri[k] * dinv;
                ri[k] = l;
                if (l == 0.0) continue;
                for (int j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
            }
        }
    }

    int size() const { return lu_.rows(); }

    // solve in place for one right-hand side
    void solve(std::vector<double>& b) const {
        const int n = size();
        for (int k = 0; k < n; ++k)
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
        for (int k = 0; k < n; ++k) {
            double bk = b[k];
            if (bk == 0.0) continue;
            for (int i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * bk;
        }
        for (int k = n - 1; k >= 0; --k) {
            b[k] /= lu_(k, k);
            double bk = b[k];
            if (bk == 0.0) continue;
            for (int i = 0; i < k; ++i) b[i] -= lu_(i, k) * bk;
        }
    }

    // X := A^{-1}, via forward/backward substitution on all columns at once
    // (row-oriented sweeps keep the inner loops contiguous)
    DenseMatrix inverse() const {
        const int n = size();
        DenseMatrix x = DenseMatrix::identity(n);
        for (int k = 0; k < n; ++k)
            if (piv_[k] != k)
                for (int j = 0; j < n; ++j) std::swap(x(k, j), x(piv_[k], j));
        // L y = P
        for (int k = 0; k < n; ++k) {
            const double* xk = x.row(k);
            for (int i = k + 1; i < n; ++i) {
                double l = lu_(i, k);
                if (l == 0.0) continue;
                double* xi = x.row(i);
                for (int j = 0; j < n; ++j) xi[j] -= l * xk[j];
            }
        }
        // U x = y
        for (int k = n - 1; k >= 0; --k) {
            double* xk = x.row(k);
            double dinv = 1.0 / lu_(k, k);
            for (int j = 0; j < n; ++j) xk[j] *= dinv;
            for (int i = 0; i < k; ++i) {
                double u = lu_(i, k);
                if (u == 0.0) continue;
                double* xi = x.row(i);
                for (int j = 0; j < n; ++j) xi[j] -= u * xk[j];
            }
        }
        return x;
    }

  private:
    DenseMatrix lu_;
    std::vector<int> piv_;
};

constexpr int kDenseInverseGuard = 32000;

}  // namespace hgraded
