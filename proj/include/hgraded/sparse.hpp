#pragma once
//
// Project : hgraded
// Module  : sparse.hpp
// Purpose : row-compressed sparse matrices (assembly target), MatrixMarket
//           export
//

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"
#include "dense.hpp"

namespace hgraded {

class SparseMatrix {
  public:
    SparseMatrix() = default;

    // build from (row, col) -> value map; keeps all assembled entries
    // (drop tolerance 0, structural zeros included)
    SparseMatrix(int n, const std::map<std::pair<int, int>, double>& entries) : n_(n) {
        row_ptr_.assign(n + 1, 0);
        for (const auto& [rc, v] : entries) {
            (void)v;
            row_ptr_[rc.first + 1]++;
        }
        for (int i = 0; i < n; ++i) row_ptr_[i + 1] += row_ptr_[i];
        col_.resize(entries.size());
        val_.resize(entries.size());
        std::vector<int> cursor(row_ptr_.begin(), row_ptr_.end() - 1);
        for (const auto& [rc, v] : entries) {
            int at = cursor[rc.first]++;
            col_[at] = rc.second;
            val_[at] = v;
        }
    }

    int size() const { return n_; }
    std::size_t nnz() const { return val_.size(); }

    double get(int i, int j) const {
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            if (col_[k] == j) return val_[k];
        return 0.0;
    }

    bool has_entry(int i, int j) const {
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            if (col_[k] == j) return true;
        return false;
    }

    void matvec(const double* x, double* y) const {
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
            y[i] = s;
        }
    }

    DenseMatrix to_dense() const {
        DenseMatrix d(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_[k]) = val_[k];
        return d;
    }

    // pattern symmetry (an invariant of the Galerkin assembly)
    bool pattern_symmetric() const {
        for (int i = 0; i < n_; ++i)
            for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                if (!has_entry(col_[k], i)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : val_) m = std::max(m, std::fabs(v));
        return m;
    }

    double sym_defect() const {  // max |A - A^T| entry
        double m = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                m = std::max(m, std::fabs(val_[k] - get(col_[k], i)));
        return m;
    }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& cols() const { return col_; }
    const std::vector<double>& vals() const { return val_; }

  private:
    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_;
    std::vector<double> val_;
};

// MatrixMarket coordinate format, 1-based indices.
inline void export_matrix_market(const SparseMatrix& a, const std::string& path) {
    if (path.empty()) throw config_error("export_matrix_market: empty path");
    std::ofstream out(path);
    if (!out) throw config_error("export_matrix_market: cannot open " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.size() << " " << a.size() << " " << a.nnz() << "\n";
    char buf[64];
    for (int i = 0; i < a.size(); ++i)
        for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1, a.cols()[k] + 1, a.vals()[k]);
            out << buf;
        }
    if (!out) throw config_error("export_matrix_market: write failure");
}

// Raw binary dump of the explicit inverse: 16-byte header "HGRD", u32 version,
// u32 N, u32 N, then row-major little-endian doubles.
inline void export_inverse_binary(const DenseMatrix& m, const std::string& path) {
    if (path.empty()) throw config_error("export_inverse_binary: empty path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("export_inverse_binary: cannot open " + path);
    const char magic[4] = {'H', 'G', 'R', 'D'};
    std::uint32_t version = 1, n = std::uint32_t(m.rows()), n2 = std::uint32_t(m.cols());
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&n2), 4);
    out.write(reinterpret_cast<const char*>(m.data().data()),
              std::streamsize(m.data().size() * sizeof(double)));
    if (!out) throw config_error("export_inverse_binary: write failure");
}

inline DenseMatrix import_inverse_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("import_inverse_binary: cannot open " + path);
    char magic[4];
    std::uint32_t version = 0, n = 0, n2 = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&n2), 4);
    if (!in || magic[0] != 'H' || magic[1] != 'G' || magic[2] != 'R' || magic[3] != 'D')
        throw config_error("import_inverse_binary: bad header");
    DenseMatrix m{int(n), int(n2)};
    in.read(reinterpret_cast<char*>(m.data().data()),
            std::streamsize(m.data().size() * sizeof(double)));
    if (!in) throw config_error("import_inverse_binary: truncated payload");
    return m;
}

}  // namespace hgraded
