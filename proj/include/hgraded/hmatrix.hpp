#pragma once
//
// Project : hgraded
// Module  : hmatrix.hpp
// Purpose : blockwise truncated-SVD compression of an explicit dense matrix
//           into the H-matrix format, plus the computable error measures
//
// Admissible blocks hold rank-r factor pairs X Y^T, small blocks are copied
// exactly. The computable bound for rank r is
//     depth(block tree) * max over admissible blocks of sigma_{r+1},
// which is exactly depth times the worst blockwise truncation error (small
// blocks contribute none). Per-block SVDs are computed once and reused for
// the whole rank sweep.
//

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "dense.hpp"
#include "partition.hpp"
#include "svd.hpp"

namespace hgraded {

struct HBlock {
    int i_lo = 0, i_len = 0, j_lo = 0, j_len = 0;
    bool admissible = false;
    LowRankFactor lr;   // admissible payload
    DenseMatrix dense;  // small payload
};

// Indices live in the partition's permuted order; hmatvec expects and returns
// permuted vectors (the experiment layer handles reordering).
struct HMatrix {
    int n = 0;
    int rank_bound = 0;
    std::vector<HBlock> blocks;

    std::size_t memory_units() const {
        std::size_t mem = 0;
        for (const auto& b : blocks) {
            if (b.admissible)
                mem += std::size_t(b.lr.rank()) * std::size_t(b.i_len + b.j_len);
            else
                mem += std::size_t(b.i_len) * std::size_t(b.j_len);
        }
        return mem;
    }
};

// Cached spectra: one SVD per admissible block serves every rank in the sweep.
struct BlockSpectra {
    int n = 0;
    int depth = 1;
    int r_cap = 0;
    std::vector<const Block*> layout;  // parallel to entries below
    struct Entry {
        int i_lo, i_len, j_lo, j_len;
        bool admissible;
        std::vector<double> sigma;  // full singular values (admissible only)
        DenseMatrix u, v;           // leading min(r_cap+1, k) columns
        DenseMatrix dense;          // small blocks
    };
    std::vector<Entry> entries;

    // sigma_{r+1} of an admissible block (0 beyond the rank)
    static double sigma_after(const Entry& e, int r) {
        return r < int(e.sigma.size()) ? e.sigma[r] : 0.0;
    }

    double max_adm_sigma_after(int r) const {
        double worst = 0.0;
        for (const auto& e : entries)
            if (e.admissible) worst = std::max(worst, sigma_after(e, r));
        return worst;
    }
};

inline BlockSpectra analyze_blocks(const DenseMatrix& dense_perm, const BlockPartition& part,
                                   int r_cap) {
    if (dense_perm.rows() != part.n() || dense_perm.cols() != part.n())
        throw numeric_error("analyze_blocks: dimension mismatch with partition");
    BlockSpectra s;
    s.n = part.n();
    s.depth = part.depth;
    s.r_cap = r_cap;
    s.entries.reserve(part.blocks.size());
    for (const auto& b : part.blocks) {
        BlockSpectra::Entry e;
        e.i_lo = part.row_lo(b);
        e.i_len = part.row_len(b);
        e.j_lo = part.col_lo(b);
        e.j_len = part.col_len(b);
        e.admissible = b.admissible;
        if (b.admissible) {
            DenseMatrix blockm(e.i_len, e.j_len);
            for (int i = 0; i < e.i_len; ++i)
                for (int j = 0; j < e.j_len; ++j) blockm(i, j) = dense_perm(e.i_lo + i, e.j_lo + j);
            SvdResult svd = svd_onesided(blockm);
            const int keep = std::min<int>(int(svd.sigma.size()), r_cap);
            e.sigma = svd.sigma;
            e.u = DenseMatrix(e.i_len, keep);
            e.v = DenseMatrix(e.j_len, keep);
            for (int c = 0; c < keep; ++c) {
                for (int i = 0; i < e.i_len; ++i) e.u(i, c) = svd.u(i, c);
                for (int j = 0; j < e.j_len; ++j) e.v(j, c) = svd.v(j, c);
            }
        } else {
            e.dense = DenseMatrix(e.i_len, e.j_len);
            for (int i = 0; i < e.i_len; ++i)
                for (int j = 0; j < e.j_len; ++j) e.dense(i, j) = dense_perm(e.i_lo + i, e.j_lo + j);
        }
        s.entries.push_back(std::move(e));
    }
    return s;
}

inline HMatrix materialize(const BlockSpectra& s, int r) {
    if (r < 1) throw config_error("materialize: r >= 1 required");
    if (r > s.r_cap) throw config_error("materialize: r beyond analyzed cap");
    HMatrix h;
    h.n = s.n;
    h.rank_bound = r;
    h.blocks.reserve(s.entries.size());
    for (const auto& e : s.entries) {
        HBlock b;
        b.i_lo = e.i_lo;
        b.i_len = e.i_len;
        b.j_lo = e.j_lo;
        b.j_len = e.j_len;
        b.admissible = e.admissible;
        if (e.admissible) {
            const int rr = std::min(r, e.u.cols());
            b.lr.x = DenseMatrix(e.i_len, rr);
            b.lr.y = DenseMatrix(e.j_len, rr);
            for (int c = 0; c < rr; ++c) {
                for (int i = 0; i < e.i_len; ++i) b.lr.x(i, c) = e.u(i, c) * e.sigma[c];
                for (int j = 0; j < e.j_len; ++j) b.lr.y(j, c) = e.v(j, c);
            }
        } else {
            b.dense = e.dense;
        }
        h.blocks.push_back(std::move(b));
    }
    return h;
}

struct ErrorRow {
    int r = 0;
    double bound = 0.0;            // depth * max_adm sigma_{r+1}
    double max_block_error = 0.0;  // max_adm sigma_{r+1}
    double spectral_error = std::numeric_limits<double>::quiet_NaN();
    std::size_t memory_units = 0;
};

struct ErrorReport {
    int depth = 1;
    std::vector<ErrorRow> rows;
};

// compress per the spec contract: H-matrix at rank bound r plus the error
// report for every rank 1..r (the blockwise SVDs carry the whole sweep).
inline std::pair<HMatrix, ErrorReport> compress(const DenseMatrix& dense_perm,
                                                const BlockPartition& part, int r) {
    if (r < 1) throw config_error("compress: r >= 1 required");
    BlockSpectra s = analyze_blocks(dense_perm, part, r);
    ErrorReport report;
    report.depth = part.depth;
    for (int rr = 1; rr <= r; ++rr) {
        ErrorRow row;
        row.r = rr;
        row.max_block_error = s.max_adm_sigma_after(rr);
        row.bound = double(part.depth) * row.max_block_error;
        for (const auto& e : s.entries) {
            if (e.admissible)
                row.memory_units +=
                    std::size_t(std::min(rr, int(e.sigma.size()))) * std::size_t(e.i_len + e.j_len);
            else
                row.memory_units += std::size_t(e.i_len) * std::size_t(e.j_len);
        }
        report.rows.push_back(row);
    }
    return {materialize(s, r), std::move(report)};
}

inline void hmatvec(const HMatrix& h, const double* x, double* y);
inline void hmatvec_transposed(const HMatrix& h, const double* x, double* y);

// checked vector interface (permuted index order)
inline std::vector<double> hmatvec(const HMatrix& h, const std::vector<double>& x) {
    if (int(x.size()) != h.n) throw numeric_error("hmatvec: dimension mismatch");
    std::vector<double> y(h.n);
    hmatvec(h, x.data(), y.data());
    return y;
}

inline void hmatvec(const HMatrix& h, const double* x, double* y) {
    for (int i = 0; i < h.n; ++i) y[i] = 0.0;
    std::vector<double> t;
    for (const auto& b : h.blocks) {
        if (b.admissible) {
            const int r = b.lr.rank();
            t.assign(r, 0.0);
            for (int c = 0; c < r; ++c) {
                double s = 0.0;
                for (int j = 0; j < b.j_len; ++j) s += b.lr.y(j, c) * x[b.j_lo + j];
                t[c] = s;
            }
            for (int i = 0; i < b.i_len; ++i) {
                double s = 0.0;
                for (int c = 0; c < r; ++c) s += b.lr.x(i, c) * t[c];
                y[b.i_lo + i] += s;
            }
        } else {
            for (int i = 0; i < b.i_len; ++i) {
                const double* row = b.dense.row(i);
                double s = 0.0;
                for (int j = 0; j < b.j_len; ++j) s += row[j] * x[b.j_lo + j];
                y[b.i_lo + i] += s;
            }
        }
    }
}

inline void hmatvec_transposed(const HMatrix& h, const double* x, double* y) {
    for (int j = 0; j < h.n; ++j) y[j] = 0.0;
    std::vector<double> t;
    for (const auto& b : h.blocks) {
        if (b.admissible) {
            const int r = b.lr.rank();
            t.assign(r, 0.0);
            for (int c = 0; c < r; ++c) {
                double s = 0.0;
                for (int i = 0; i < b.i_len; ++i) s += b.lr.x(i, c) * x[b.i_lo + i];
                t[c] = s;
            }
            for (int j = 0; j < b.j_len; ++j) {
                double s = 0.0;
                for (int c = 0; c < r; ++c) s += b.lr.y(j, c) * t[c];
                y[b.j_lo + j] += s;
            }
        } else {
            for (int i = 0; i < b.i_len; ++i) {
                const double* row = b.dense.row(i);
                const double xi = x[b.i_lo + i];
                for (int j = 0; j < b.j_len; ++j) y[b.j_lo + j] += row[j] * xi;
            }
        }
    }
}

inline DenseMatrix reconstruct_dense(const HMatrix& h) {
    DenseMatrix d(h.n, h.n);
    for (const auto& b : h.blocks) {
        if (b.admissible) {
            for (int i = 0; i < b.i_len; ++i)
                for (int j = 0; j < b.j_len; ++j) {
                    double s = 0.0;
                    for (int c = 0; c < b.lr.rank(); ++c) s += b.lr.x(i, c) * b.lr.y(j, c);
                    d(b.i_lo + i, b.j_lo + j) = s;
                }
        } else {
            for (int i = 0; i < b.i_len; ++i)
                for (int j = 0; j < b.j_len; ++j) d(b.i_lo + i, b.j_lo + j) = b.dense(i, j);
        }
    }
    return d;
}

// ||A_inv - H||_2 by power iteration on E^T E (200 iterations or relative
// change < 1e-10); A_inv must be in the partition's permuted order. Always
// returns the best estimate; the iteration count is surfaced on request.
inline double spectral_error(const DenseMatrix& a_inv_perm, const HMatrix& h,
                             int max_iter = 200, double rtol = 1e-10,
                             int* iterations_out = nullptr) {
    if (a_inv_perm.rows() != h.n || a_inv_perm.cols() != h.n)
        throw numeric_error("spectral_error: dimension mismatch");
    const int n = h.n;
    Rng rng(0x5eed5eedULL);
    std::vector<double> v(n), ev(n), tv(n), hv(n);
    double nrm = 0.0;
    for (auto& x : v) x = rng.next_real(-1.0, 1.0);
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;

    double lambda = 0.0;
    int iters = 0;
    for (int it = 0; it < max_iter; ++it) {
        iters = it + 1;
        // ev = (A_inv - H) v
        a_inv_perm.matvec(v.data(), ev.data());
        hmatvec(h, v.data(), hv.data());
        for (int i = 0; i < n; ++i) ev[i] -= hv[i];
        // tv = (A_inv - H)^T ev
        a_inv_perm.matvec_transposed(ev.data(), tv.data());
        hmatvec_transposed(h, ev.data(), hv.data());
        for (int i = 0; i < n; ++i) tv[i] -= hv[i];
        double nl = 0.0;
        for (double x : tv) nl += x * x;
        nl = std::sqrt(nl);
        if (nl == 0.0) {
            if (iterations_out) *iterations_out = iters;
            return 0.0;
        }
        double new_lambda = 0.0;  // Rayleigh quotient v^T (E^T E v)
        for (int i = 0; i < n; ++i) new_lambda += v[i] * tv[i];
        for (int i = 0; i < n; ++i) v[i] = tv[i] / nl;
        if (it > 0 && std::fabs(new_lambda - lambda) <= rtol * std::max(1e-300, new_lambda)) {
            lambda = new_lambda;
            break;
        }
        lambda = new_lambda;
    }
    if (iterations_out) *iterations_out = iters;
    return std::sqrt(std::max(0.0, lambda));
}

struct DecayFit {
    double rate = 0.0;       // slope of ln(bound) vs r
    double intercept = 0.0;
    double r2 = 0.0;         // coefficient of determination of the fit
    int samples = 0;
};

// Least-squares fit of ln(error) vs r over the samples above the floating
// floor (1e-13 relative to the first row's error).
inline DecayFit fit_decay(const ErrorReport& report) {
    std::vector<std::pair<double, double>> pts;
    double e0 = report.rows.empty() ? 0.0 : report.rows.front().bound;
    for (const auto& row : report.rows) {
        if (row.bound > 0.0 && row.bound > 1e-13 * e0) pts.push_back({double(row.r), std::log(row.bound)});
    }
    if (pts.size() < 4) throw numeric_error("fit_decay: need at least 4 rank samples above the error floor");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double n = double(pts.size());
    double denom = n * sxx - sx * sx;
    DecayFit f;
    f.samples = int(pts.size());
    f.rate = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.rate * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (auto [x, y] : pts) {
        double d = y - (f.intercept + f.rate * x);
        ss_res += d * d;
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// --- binary dump ---------------------------------------------------------------
//
// per block: six little-endian u32 (i_lo, i_len, j_lo, j_len, kind, r)
// followed by the payload as 64-bit doubles (X then Y, or the dense block).

inline void dump_hmatrix(const HMatrix& h, const std::string& path) {
    if (path.empty()) throw config_error("dump_hmatrix: empty path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("dump_hmatrix: cannot open " + path);
    auto put_u32 = [&out](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    put_u32(std::uint32_t(h.n));
    put_u32(std::uint32_t(h.rank_bound));
    put_u32(std::uint32_t(h.blocks.size()));
    for (const auto& b : h.blocks) {
        put_u32(std::uint32_t(b.i_lo));
        put_u32(std::uint32_t(b.i_len));
        put_u32(std::uint32_t(b.j_lo));
        put_u32(std::uint32_t(b.j_len));
        put_u32(b.admissible ? 1u : 0u);
        put_u32(std::uint32_t(b.admissible ? b.lr.rank() : 0));
        auto put_mat = [&out](const DenseMatrix& m) {
            out.write(reinterpret_cast<const char*>(m.data().data()),
                      std::streamsize(m.data().size() * sizeof(double)));
        };
        if (b.admissible) {
            put_mat(b.lr.x);
            put_mat(b.lr.y);
        } else {
            put_mat(b.dense);
        }
    }
    if (!out) throw config_error("dump_hmatrix: write failure");
}

inline HMatrix load_hmatrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("load_hmatrix: cannot open " + path);
    auto get_u32 = [&in]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    HMatrix h;
    h.n = int(get_u32());
    h.rank_bound = int(get_u32());
    std::uint32_t nb = get_u32();
    for (std::uint32_t k = 0; k < nb; ++k) {
        HBlock b;
        b.i_lo = int(get_u32());
        b.i_len = int(get_u32());
        b.j_lo = int(get_u32());
        b.j_len = int(get_u32());
        b.admissible = get_u32() != 0;
        int r = int(get_u32());
        auto get_mat = [&in](int rows, int cols) {
            DenseMatrix m(rows, cols);
            in.read(reinterpret_cast<char*>(m.data().data()),
                    std::streamsize(m.data().size() * sizeof(double)));
            return m;
        };
        if (b.admissible) {
            b.lr.x = get_mat(b.i_len, r);
            b.lr.y = get_mat(b.j_len, r);
        } else {
            b.dense = get_mat(b.i_len, b.j_len);
        }
        h.blocks.push_back(std::move(b));
    }
    if (!in) throw config_error("load_hmatrix: truncated payload");
    return h;
}

}  // namespace hgraded
