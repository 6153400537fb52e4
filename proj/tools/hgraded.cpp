//
// hgraded: experiment CLI
//
// Subcommands:
//   run      --config exp1.cfg [overrides]   full pipeline, CSV + report
//   verify                                   operator identity suite
//   polyops verify --d 2 --p 4               identity suite for one (d,p)
//   mesh gen --alpha inf --H 0.25 ...        mesh generation to a text file
//   compare c1.cfg c2.cfg c3.cfg             three-size overlay CSV
//
// Exit codes: 0 pass, 1 suite failure, 2 configuration error, 3 numeric failure.
//

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hgraded/experiment.hpp"
#include "hgraded/identity_suite.hpp"

using namespace hgraded;

namespace {

void print_suite(const std::vector<SuiteRow>& rows) {
    std::printf("%-28s %12s %10s  %s\n", "identity", "worst", "tol", "status");
    for (const auto& r : rows) {
        if (r.skipped)
            std::printf("%-28s %12s %10s  SKIP (%s)\n", r.name.c_str(), "-", "-", r.note.c_str());
        else
            std::printf("%-28s %12.3e %10.1e  %s\n", r.name.c_str(), r.worst, r.tol,
                        r.pass() ? "pass" : "FAIL");
    }
}

void print_run(const RunReport& rr) {
    std::printf("N = %d, h_min = %.6g, h_max = %.6g\n", rr.n, rr.h_min, rr.h_max);
    std::printf("depth = %d, sparsity = %d, C_small = %d, C_adm = %g\n", rr.depth, rr.sparsity,
                rr.c_small, rr.c_adm);
    std::printf("fitted rate = %.4f (R^2 = %.4f over %d samples)\n", rr.fit.rate, rr.fit.r2,
                rr.fit.samples);
    std::printf("phases [s]: mesh %.2f assemble %.2f invert %.2f cluster %.2f compress %.2f "
                "sweep %.2f report %.2f | total %.2f\n",
                rr.times.mesh, rr.times.assemble, rr.times.invert, rr.times.cluster,
                rr.times.compress, rr.times.sweep, rr.times.report, rr.times.total);
    std::printf("wrote %s and %s\n", rr.csv_path.c_str(), rr.report_path.c_str());
}

struct CliOverrides {
    std::string alpha, edge, coeffs, spectral, out_dir;
    double H = -1, c_adm = -1;
    int layers = -1, p = -1, c_small = -1, r_min = -1, r_max = -1;
    bool large = false;
    bool export_matrices = false;
    bool export_hmatrix = false;

    void apply(ExperimentConfig& c) const {
        if (!alpha.empty()) config_set(c, "alpha", alpha);
        if (H >= 0) c.grading.H = H;
        if (!edge.empty()) c.grading.edge = edge_from_string(edge);
        if (layers >= 0) c.grading.layers = layers;
        if (p >= 0) c.p = p;
        if (!coeffs.empty()) c.coeffs = coeffs;
        if (c_small >= 0) c.c_small = c_small;
        if (c_adm >= 0) c.c_adm = c_adm;
        if (r_min >= 0) c.r_min = r_min;
        if (r_max >= 0) c.r_max = r_max;
        if (!out_dir.empty()) c.out_dir = out_dir;
        if (!spectral.empty()) c.spectral = spectral;
        if (large) c.large = true;
        if (export_matrices) c.export_matrices = true;
        if (export_hmatrix) c.export_hmatrix = true;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"H-matrix approximability of FEM inverses on graded meshes"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the full experiment pipeline");
    std::string config_path;
    CliOverrides ov;
    run->add_option("--config", config_path, "flat key = value config file");
    run->add_option("--alpha", ov.alpha, "grading exponent (number or inf)");
    run->add_option("--H", ov.H, "grading parameter H in (0,1]");
    run->add_option("--edge", ov.edge, "target edge: left|right|bottom|top|none");
    run->add_option("--layers", ov.layers, "layer count");
    run->add_option("--p", ov.p, "polynomial degree 1..4");
    run->add_option("--coeffs", ov.coeffs, "laplace | convdiff");
    run->add_option("--C-small", ov.c_small, "cluster leaf size");
    run->add_option("--C-adm", ov.c_adm, "admissibility constant");
    run->add_option("--r-min", ov.r_min, "smallest rank bound");
    run->add_option("--r-max", ov.r_max, "largest rank bound");
    run->add_option("-o,--out-dir", ov.out_dir, "output directory");
    run->add_option("--spectral", ov.spectral, "spectral error column: auto|on|off");
    run->add_flag("--large", ov.large, "enable large problem sizes (lifts the N guard)");
    run->add_flag("--export-matrices", ov.export_matrices, "write A.mtx and Ainv.bin");
    run->add_flag("--export-hmatrix", ov.export_hmatrix, "write hmatrix.hm at r_max");

    auto* verify = app.add_subcommand("verify", "run the operator identity suite");

    auto* polyops = app.add_subcommand("polyops", "polynomial operator utilities");
    auto* pverify = polyops->add_subcommand("verify", "identity suite for one (d,p)");
    int pv_d = 2, pv_p = 4;
    pverify->add_option("--d", pv_d, "dimension (1..3)");
    pverify->add_option("--p", pv_p, "degree");

    auto* meshcmd = app.add_subcommand("mesh", "mesh utilities");
    auto* gen = meshcmd->add_subcommand("gen", "generate a graded mesh");
    std::string g_alpha = "1", g_edge = "none", g_out = "mesh.txt";
    double g_H = 0.25;
    int g_layers = 0;
    gen->add_option("--alpha", g_alpha, "grading exponent (number or inf)");
    gen->add_option("--H", g_H, "grading parameter");
    gen->add_option("--edge", g_edge, "target edge");
    gen->add_option("--layers", g_layers, "layer count");
    gen->add_option("-o,--output", g_out, "output path");

    auto* compare = app.add_subcommand("compare", "three-size comparison");
    std::vector<std::string> cmp_paths;
    compare->add_option("configs", cmp_paths, "three config files")->expected(3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            ExperimentConfig cfg;
            if (!config_path.empty()) cfg = parse_config(config_path);
            ov.apply(cfg);
            RunReport rr = run_experiment(cfg);
            print_run(rr);
            return 0;
        }
        if (*verify) {
            auto rows = run_identity_suite();
            print_suite(rows);
            return suite_passed(rows) ? 0 : 1;
        }
        if (*pverify) {
            if (pv_d < 1 || pv_d > 3) throw config_error("polyops verify: d must be 1..3");
            if (pv_p < 1) throw config_error("polyops verify: p must be >= 1");
            IdentityOptions opt;
            opt.d_only = pv_d;
            opt.p_only = pv_p;
            auto rows = run_identity_suite(opt);
            print_suite(rows);
            return suite_passed(rows) ? 0 : 1;
        }
        if (*gen) {
            ExperimentConfig tmp;
            config_set(tmp, "alpha", g_alpha);
            tmp.grading.H = g_H;
            tmp.grading.edge = edge_from_string(g_edge);
            tmp.grading.layers = g_layers;
            Mesh m = make_graded_mesh(tmp.grading);
            export_mesh(m, g_out);
            auto [hmin, hmax] = mesh_widths(m);
            std::printf("wrote %s: %d vertices, %d elements, h_min %.3e, h_max %.3e, "
                        "shape %.2f\n",
                        g_out.c_str(), m.n_vertices(), m.n_elements(), hmin, hmax,
                        m.stats.shape_max);
            return 0;
        }
        if (*compare) {
            std::vector<ExperimentConfig> cfgs;
            for (const auto& path : cmp_paths) cfgs.push_back(parse_config(path));
            CompareReport cr = compare_three_sizes(cfgs);
            for (int k = 0; k < 3; ++k)
                std::printf("size %d: N = %d, rate = %.4f\n", k, cr.runs[k].n, cr.rates[k]);
            std::printf("max relative rate spread = %.3f (size stability wants <= 0.30)\n",
                        cr.max_rel_spread);
            std::printf("wrote %s\n", cr.csv_path.c_str());
            return cr.max_rel_spread <= 0.30 ? 0 : 1;
        }
    } catch (const config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
