#pragma once
//
// Project : hgraded
// Module  : experiment.hpp
// Purpose : end-to-end experiment driver
//           mesh -> assemble -> invert -> cluster -> partition -> compress
//           (rank sweep) -> decay fit, with CSV and human-readable reports
//

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "assemble.hpp"
#include "cluster.hpp"
#include "common.hpp"
#include "hmatrix.hpp"
#include "mesh.hpp"
#include "partition.hpp"
#include "sparse.hpp"

namespace hgraded {

struct ExperimentConfig {
    GradingSpec grading;
    int p = 1;
    std::string coeffs = "laplace";  // laplace | convdiff
    int c_small = 0;                 // 0 = auto: max(32, binom(p+2,2))
    double c_adm = 2.0;
    int r_min = 1;
    int r_max = 10;
    std::string out_dir = "out";
    std::string spectral = "auto";  // auto (N <= 2000) | on | off
    bool large = false;
    bool export_matrices = false;
    bool export_hmatrix = false;

    int effective_c_small() const {
        return c_small > 0 ? c_small : std::max(32, binom_int(p + 2, 2));
    }

    void validate() const {
        grading.validate();
        if (p < 1 || p > 4) throw config_error("config: p in 1..4 required");
        if (coeffs != "laplace" && coeffs != "convdiff")
            throw config_error("config: coeffs must be laplace or convdiff");
        if (r_min < 1 || r_max < r_min) throw config_error("config: rank range empty");
        if (!(c_adm > 0.0)) throw config_error("config: C_adm > 0 required");
        if (spectral != "auto" && spectral != "on" && spectral != "off")
            throw config_error("config: spectral must be auto, on or off");
        if (out_dir.empty()) throw config_error("config: out_dir empty");
    }

    Coefficients coefficients() const {
        return coeffs == "laplace" ? Coefficients::laplace() : Coefficients::convection_diffusion();
    }
};

// --- flat key = value config files -------------------------------------------

inline void config_set(ExperimentConfig& c, const std::string& key, const std::string& value) {
    auto to_double = [&](const std::string& s) {
        if (s == "inf" || s == "infinity") return kInf;
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw config_error("config: bad numeric value for " + key + ": " + value);
        }
    };
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw config_error("config: bad integer value for " + key + ": " + value);
        }
    };
    auto to_bool = [&](const std::string& s) {
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw config_error("config: bad boolean value for " + key + ": " + value);
    };
    if (key == "alpha") c.grading.alpha = to_double(value);
    else if (key == "H") c.grading.H = to_double(value);
    else if (key == "edge") c.grading.edge = edge_from_string(value);
    else if (key == "layers") c.grading.layers = to_int(value);
    else if (key == "h_floor") c.grading.h_floor = to_double(value);
    else if (key == "p") c.p = to_int(value);
    else if (key == "coeffs") c.coeffs = value;
    else if (key == "C_small") c.c_small = to_int(value);
    else if (key == "C_adm") c.c_adm = to_double(value);
    else if (key == "r_min") c.r_min = to_int(value);
    else if (key == "r_max") c.r_max = to_int(value);
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "spectral") c.spectral = value;
    else if (key == "large") c.large = to_bool(value);
    else if (key == "export_matrices") c.export_matrices = to_bool(value);
    else if (key == "export_hmatrix") c.export_hmatrix = to_bool(value);
    else throw config_error("config: unknown key " + key);
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        auto trim = [](std::string t) {
            auto b = t.find_first_not_of(" \t\r");
            auto e = t.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : t.substr(b, e - b + 1);
        };
        s = trim(s);
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) + " is not key = value");
        config_set(c, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return c;
}

// --- run report ----------------------------------------------------------------

struct PhaseTimes {
    double mesh = 0, assemble = 0, invert = 0, cluster = 0, compress = 0, sweep = 0, report = 0;
    double total = 0;
    double sum() const { return mesh + assemble + invert + cluster + compress + sweep + report; }
};

struct RunReport {
    int n = 0;
    double h_min = 0, h_max = 0;
    int depth = 0;
    int sparsity = 0;
    int c_small = 0;
    double c_adm = 0;
    ErrorReport errors;
    DecayFit fit;
    PhaseTimes times;
    std::string csv_path, report_path;
};

namespace expdetail {

inline double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// phase-labelled error propagation
template <typename F>
auto phase(const char* name, F&& fn) {
    try {
        return fn();
    } catch (const config_error& e) {
        throw config_error(std::string("phase ") + name + ": " + e.what());
    } catch (const numeric_error& e) {
        throw numeric_error(std::string("phase ") + name + ": " + e.what());
    }
}

inline std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace expdetail

// CSV schema: r,bound,spectral_error,memory_units
inline void write_error_csv(const ErrorReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical across runs
    if (!out) throw config_error("write_error_csv: cannot open " + path);
    out << "r,bound,spectral_error,memory_units\n";
    for (const auto& row : report.rows) {
        out << row.r << "," << expdetail::format17(row.bound) << ","
            << expdetail::format17(row.spectral_error) << "," << row.memory_units << "\n";
    }
    if (!out) throw config_error("write_error_csv: write failure");
}

inline RunReport run_experiment(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.validate();
    RunReport rr;
    rr.c_small = cfg.effective_c_small();
    rr.c_adm = cfg.c_adm;
    std::filesystem::create_directories(cfg.out_dir);

    auto t0 = expdetail::now_seconds();
    double t_begin = t0;

    Mesh mesh = expdetail::phase("mesh", [&] { return make_graded_mesh(cfg.grading); });
    auto [hmin, hmax] = mesh_widths(mesh);
    rr.h_min = hmin;
    rr.h_max = hmax;
    rr.times.mesh = expdetail::now_seconds() - t0;

    t0 = expdetail::now_seconds();
    auto [A, dm] = expdetail::phase("assemble",
                                    [&] { return assemble_stiffness(mesh, cfg.coefficients(), cfg.p); });
    rr.n = A.size();
    if (rr.n < 1) throw numeric_error("run_experiment: no interior dofs");
    int guard = cfg.large ? kDenseInverseGuard : 8000;
    if (rr.n > guard)
        throw numeric_error("run_experiment: N = " + std::to_string(rr.n) +
                            " exceeds the dense-inverse guard (use large = true beyond 8000)");
    rr.times.assemble = expdetail::now_seconds() - t0;

    t0 = expdetail::now_seconds();
    DenseMatrix ainv = expdetail::phase("invert", [&] { return solve_dense_inverse(A); });
    if (cfg.export_matrices) {
        std::filesystem::create_directories(cfg.out_dir);
        export_matrix_market(A, (std::filesystem::path(cfg.out_dir) / "A.mtx").string());
        export_inverse_binary(ainv, (std::filesystem::path(cfg.out_dir) / "Ainv.bin").string());
    }
    rr.times.invert = expdetail::now_seconds() - t0;

    t0 = expdetail::now_seconds();
    std::vector<Box2> boxes;
    boxes.reserve(dm.dofs.size());
    for (const auto& d : dm.dofs) boxes.push_back(d.support_box);
    BlockPartition part = expdetail::phase("cluster", [&] {
        return build_block_partition(build_cluster_tree(boxes, rr.c_small), cfg.c_adm);
    });
    rr.depth = part.depth;
    rr.sparsity = part.sparsity;
    // permute the inverse into cluster order
    DenseMatrix ainv_perm(rr.n, rr.n);
    for (int i = 0; i < rr.n; ++i) {
        const int pi = part.tree.perm[i];
        for (int j = 0; j < rr.n; ++j) ainv_perm(i, j) = ainv(pi, part.tree.perm[j]);
    }
    ainv = DenseMatrix();  // release
    rr.times.cluster = expdetail::now_seconds() - t0;

    t0 = expdetail::now_seconds();
    BlockSpectra spectra =
        expdetail::phase("compress", [&] { return analyze_blocks(ainv_perm, part, cfg.r_max); });
    rr.times.compress = expdetail::now_seconds() - t0;

    t0 = expdetail::now_seconds();
    bool want_spectral = cfg.spectral == "on" || (cfg.spectral == "auto" && rr.n <= 2000);
    rr.errors.depth = part.depth;
    for (int r = cfg.r_min; r <= cfg.r_max; ++r) {
        ErrorRow row;
        row.r = r;
        row.max_block_error = spectra.max_adm_sigma_after(r);
        row.bound = double(part.depth) * row.max_block_error;
        for (const auto& e : spectra.entries) {
            if (e.admissible)
                row.memory_units +=
                    std::size_t(std::min(r, int(e.sigma.size()))) * std::size_t(e.i_len + e.j_len);
            else
                row.memory_units += std::size_t(e.i_len) * std::size_t(e.j_len);
        }
        if (want_spectral) {
            HMatrix h = materialize(spectra, r);
            row.spectral_error = spectral_error(ainv_perm, h);
        }
        rr.errors.rows.push_back(row);
    }
    if (cfg.export_hmatrix)
        dump_hmatrix(materialize(spectra, cfg.r_max),
                     (std::filesystem::path(cfg.out_dir) / "hmatrix.hm").string());
    rr.times.sweep = expdetail::now_seconds() - t0;

    t0 = expdetail::now_seconds();
    try {
        rr.fit = fit_decay(rr.errors);
    } catch (const numeric_error&) {
        // short rank ranges or errors at the floor: degenerate but finite fit
        rr.fit.rate = 0.0;
        rr.fit.intercept =
            rr.errors.rows.empty() || rr.errors.rows.front().bound <= 0.0
                ? 0.0
                : std::log(rr.errors.rows.front().bound);
        rr.fit.r2 = 1.0;
        rr.fit.samples = int(rr.errors.rows.size());
    }
    export_mesh(mesh, (std::filesystem::path(cfg.out_dir) / "mesh.txt").string());
    rr.csv_path = (std::filesystem::path(cfg.out_dir) / "errors.csv").string();
    write_error_csv(rr.errors, rr.csv_path);

    rr.report_path = (std::filesystem::path(cfg.out_dir) / "report.txt").string();
    rr.times.report = expdetail::now_seconds() - t0;
    rr.times.total = expdetail::now_seconds() - t_begin;
    {
        std::ofstream out(rr.report_path, std::ios::binary);
        if (!out) throw config_error("run_experiment: cannot open " + rr.report_path);
        char buf[256];
        out << "hgraded experiment report\n";
        out << "alpha = " << (std::isinf(cfg.grading.alpha) ? std::string("inf")
                                                            : expdetail::format17(cfg.grading.alpha))
            << ", H = " << expdetail::format17(cfg.grading.H)
            << ", edge = " << to_string(cfg.grading.edge) << ", layers = " << cfg.grading.layers
            << "\n";
        out << "p = " << cfg.p << ", coeffs = " << cfg.coeffs << "\n";
        out << "C_small = " << rr.c_small << ", C_adm = " << expdetail::format17(rr.c_adm) << "\n";
        out << "N = " << rr.n << ", h_min = " << expdetail::format17(rr.h_min)
            << ", h_max = " << expdetail::format17(rr.h_max) << "\n";
        out << "depth = " << rr.depth << ", sparsity = " << rr.sparsity << "\n";
        std::snprintf(buf, sizeof(buf), "fitted rate = %.6f (intercept %.6f, R^2 %.6f, %d samples)\n",
                      rr.fit.rate, rr.fit.intercept, rr.fit.r2, rr.fit.samples);
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "times [s]: mesh %.3f assemble %.3f invert %.3f cluster %.3f compress %.3f "
                      "sweep %.3f report %.3f total %.3f\n",
                      rr.times.mesh, rr.times.assemble, rr.times.invert, rr.times.cluster,
                      rr.times.compress, rr.times.sweep, rr.times.report, rr.times.total);
        out << buf;
        out << "r,bound,max_block_error,spectral_error,memory_units\n";
        for (const auto& row : rr.errors.rows) {
            out << row.r << "," << expdetail::format17(row.bound) << ","
                << expdetail::format17(row.max_block_error) << ","
                << expdetail::format17(row.spectral_error) << "," << row.memory_units << "\n";
        }
    }
    return rr;
}

// --- three-size comparison -------------------------------------------------------

struct CompareReport {
    std::vector<RunReport> runs;
    std::vector<double> rates;
    double max_rel_spread = 0.0;  // max over pairs of |ri-rj| / min(|ri|,|rj|)
    std::string csv_path;
};

inline CompareReport compare_three_sizes(const std::vector<ExperimentConfig>& configs) {
    if (configs.size() != 3) throw config_error("compare_three_sizes: exactly three configs");
    for (int k = 1; k < 3; ++k) {
        const auto& a = configs[0];
        const auto& b = configs[k];
        bool same = a.grading.alpha == b.grading.alpha && a.grading.H == b.grading.H &&
                    a.grading.edge == b.grading.edge && a.p == b.p && a.coeffs == b.coeffs &&
                    a.c_small == b.c_small && a.c_adm == b.c_adm && a.r_min == b.r_min &&
                    a.r_max == b.r_max;
        if (!same)
            throw config_error("compare_three_sizes: configs may differ only in layer count");
    }
    CompareReport cr;
    for (int k = 0; k < 3; ++k) {
        ExperimentConfig c = configs[k];
        c.out_dir = (std::filesystem::path(configs[k].out_dir) /
                     ("size_" + std::to_string(k))).string();
        cr.runs.push_back(run_experiment(c));
        cr.rates.push_back(cr.runs.back().fit.rate);
    }
    // shared r range is identical by construction (same r_min/r_max)
    cr.csv_path = (std::filesystem::path(configs[0].out_dir) / "compare.csv").string();
    std::filesystem::create_directories(configs[0].out_dir);
    std::ofstream out(cr.csv_path, std::ios::binary);
    if (!out) throw config_error("compare_three_sizes: cannot open " + cr.csv_path);
    out << "r";
    for (const auto& run : cr.runs) out << ",bound_N" << run.n;
    out << "\n";
    for (std::size_t i = 0; i < cr.runs[0].errors.rows.size(); ++i) {
        out << cr.runs[0].errors.rows[i].r;
        for (const auto& run : cr.runs) out << "," << expdetail::format17(run.errors.rows[i].bound);
        out << "\n";
    }
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            double lo = std::min(std::fabs(cr.rates[a]), std::fabs(cr.rates[b]));
            if (lo > 0.0)
                cr.max_rel_spread =
                    std::max(cr.max_rel_spread, std::fabs(cr.rates[a] - cr.rates[b]) / lo);
        }
    return cr;
}

}  // namespace hgraded
