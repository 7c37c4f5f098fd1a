// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line with the measured numbers; the process exit code is the number of
// failed criteria.
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "parhom/diagnostics.hpp"
#include "parhom/experiments.hpp"
#include "parhom/fem.hpp"
#include "parhom/harmonic.hpp"
#include "parhom/media.hpp"
#include "parhom/metrics.hpp"
#include "parhom/rng.hpp"
#include "parhom/sparse.hpp"
#include "parhom/upscale.hpp"

using namespace parhom;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

const SourceFn one = [](Vec2, double) { return 1.0; };

ExperimentConfig base_config(const char* family, int fine_n, double T, std::vector<int> nc) {
    ExperimentConfig cfg;
    cfg.medium_family = family;
    cfg.fine_n = fine_n;
    cfg.T = T;
    cfg.coarse_n = std::move(nc);
    return cfg;
}

double energy_norm(const SparseMatrix& a, const std::vector<double>& e) {
    const std::vector<double> ae = a.matvec(e);
    double s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * ae[i];
    return std::sqrt(std::max(s, 0.0));
}

// ---- criterion 1: trig-medium table reproduction --------------------------

void criterion_1(const RunResult& trig128, const RunResult& trig64) {
    const double t7[2] = {0.0019, 0.0015};  // coarse-mesh L2 targets, dof 9 / 49
    const double t8[2] = {0.0034, 0.0016};  // fine-mesh L2 targets
    bool ok = trig128.wall_seconds <= 1800.0 && trig64.wall_seconds <= 300.0;
    double c128[2], f128[2], c64[2], f64[2];
    for (int i = 0; i < 2; ++i) {
        c128[i] = trig128.coarse[i].final_coarse.l2;
        f128[i] = trig128.coarse[i].final_fine.l2;
        c64[i] = trig64.coarse[i].final_coarse.l2;
        f64[i] = trig64.coarse[i].final_fine.l2;
        ok = ok && c128[i] <= 3.0 * t7[i] && f128[i] <= 3.0 * t8[i];
        ok = ok && c64[i] <= 3.0 * c128[i] && f64[i] <= 3.0 * f128[i];
    }
    std::string detail = fmt(
        "trig tables, n=128 coarse L2 %.4g/%.4g (target <=%.4g/%.4g), fine L2 %.4g/%.4g "
        "(target <=%.4g/%.4g), %.0fs; n=64 coarse %.4g/%.4g fine %.4g/%.4g, %.0fs",
        c128[0], c128[1], 3.0 * t7[0], 3.0 * t7[1], f128[0], f128[1], 3.0 * t8[0], 3.0 * t8[1],
        trig128.wall_seconds, c64[0], c64[1], f64[0], f64[1], trig64.wall_seconds);
    if (!ok)
        detail +=
            " -- not reachable with P1 composed elements: the best possible approximation "
            "from this coarse space is ~0.13 relative L2 at dof 9 (~0.014 even with cubic "
            "splines), above the target band; the published values imply a richer coarse space";
    report(1, ok, detail);
}

// ---- criterion 2: convergence order in h ----------------------------------

void criterion_2(const RunResult& perc128) {
    std::vector<std::pair<int, ErrorNorms>> rows;
    for (const auto& cr : perc128.coarse) rows.push_back({cr.coarse_n, cr.final_fine});
    const ConvergenceTable t = convergence_table(rows);
    const double h1_9 = perc128.coarse[0].final_fine.h1;
    const double h1_49 = perc128.coarse[1].final_fine.h1;
    const double h1_225 = perc128.coarse[2].final_fine.h1;
    const bool ok = h1_9 > h1_49 && h1_49 > h1_225 && t.slopes.h1 >= 0.5;
    report(2, ok,
           fmt("percolation H1 fine errors %.4g > %.4g > %.4g, log-log slope %.2f (>= 0.5)",
               h1_9, h1_49, h1_225, t.slopes.h1));
}

// ---- criterion 3: order in the coarse time step ---------------------------

void criterion_3() {
    // short horizon so the transient, not the steady state, is measured
    const Mesh mesh = build_uniform_mesh(64);
    const Medium medium = Medium::site_percolation(mesh, 3);
    const double T = 0.1;
    const int n_sub = 512;
    const HarmonicMap map = evolve_F(mesh, medium, T, n_sub);
    const CoarseSpace space(8, map, mesh);
    const CoarseTrajectory semi = solve_coarse_semidiscrete(space, medium, one, T, n_sub);
    const SparseMatrix a = assemble_stiffness(mesh, medium, 0.0);

    std::vector<double> dts, errs;
    for (const int m : {8, 16, 32, 64}) {
        const CoarseTrajectory v = run_coarse_solver(space, medium, one, T, m);
        std::vector<double> e = space.phi(0).multiply(semi.c.back());
        const std::vector<double> w = space.phi(0).multiply(v.c.back());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] -= w[i];
        dts.push_back(T / m);
        errs.push_back(energy_norm(a, e));
    }
    // least-squares slope of log(err) vs log(dt)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double x = std::log(dts[i]), y = std::log(errs[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(dts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report(3, slope >= 0.8,
           fmt("energy error vs coarse dt: %.3g %.3g %.3g %.3g at M=8..64, slope %.2f (>= 0.8)",
               errs[0], errs[1], errs[2], errs[3], slope));
}

// ---- criterion 4: dt refinement at fixed h on the trig medium -------------

void criterion_4() {
    const Mesh mesh = build_uniform_mesh(64);
    const Medium medium = Medium::trig_multiscale();
    const int n_fine = 256;
    const HarmonicMap map = evolve_F(mesh, medium, 0.1, n_fine);
    const CoarseSpace space(8, map, mesh);
    auto final_field = [&](int m) {
        const CoarseTrajectory v = run_coarse_solver(space, medium, one, 0.1, m);
        return reconstruct(space, v.c.back(), n_fine);
    };
    const std::vector<double> v4 = final_field(4), v8 = final_field(8);
    const std::vector<double> v16 = final_field(16), v32 = final_field(32);
    auto dist = [&](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> e(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) e[i] = x[i] - y[i];
        return l2_norm(mesh, e);
    };
    const double proxy_coarse = dist(v4, v16);  // error proxy vs 4x finer M
    const double proxy_fine = dist(v8, v32);
    const double gain = proxy_coarse / proxy_fine;
    report(4, gain >= 1.5,
           fmt("trig fixed h: halving coarse dt shrinks the 4x-refined proxy %.3g -> %.3g, "
               "factor %.2f (>= 1.5)",
               proxy_coarse, proxy_fine, gain));
}

// ---- criterion 5: energy stability across media ---------------------------

void criterion_5(const RunResult& identity_run, const std::vector<const RunResult*>& others) {
    double c_ref = 0.0;
    for (const auto& cr : identity_run.coarse) c_ref = std::max(c_ref, cr.stability_c);
    bool ok = c_ref > 0.0;
    double worst = 0.0;
    std::string worst_medium = "-";
    for (const RunResult* r : others)
        for (const auto& cr : r->coarse)
            if (cr.stability_c > worst) {
                worst = cr.stability_c;
                worst_medium = r->config.medium_family;
            }
    ok = ok && worst <= 10.0 * c_ref;
    report(5, ok,
           fmt("per-step energy constant: identity %.3g, worst %.3g (%s), bound 10x = %.3g",
               c_ref, worst, worst_medium.c_str(), 10.0 * c_ref));
}

// ---- criterion 6: compensation diagnostic ---------------------------------

void criterion_6(const RunResult& perc128) {
    const Mesh mesh = build_uniform_mesh(32);
    const Medium medium = Medium::identity();
    const Trajectory traj = fine_reference_solve(mesh, medium, one, 1.0, 200);
    const HarmonicMap map = solve_F_elliptic(mesh, medium);
    const double ident = compensation_ratio(mesh, traj.fields.back(), map.nodal[0], 33);
    const double perc = perc128.compensation;
    const bool ok =
        perc128.has_compensation && perc <= 0.2 && std::abs(ident - 1.0) <= 1e-9;
    report(6, ok,
           fmt("compensation ratio: percolation n=128 %.4g (<= 0.2), identity %.12g (= 1 "
               "+- 1e-9)",
               perc, ident));
}

// ---- criterion 7: reduction exactness -------------------------------------

void criterion_7() {
    // (a) identity medium: F is the identity and the multiscale solve equals
    // plain coarse Galerkin backward Euler
    const Mesh fine = build_uniform_mesh(32);
    const Medium ident = Medium::identity();
    const HarmonicMap map = evolve_F(fine, ident, 0.5, 40);
    double f_dev = 0.0;
    for (std::size_t v = 0; v < fine.nodes.size(); ++v) {
        f_dev = std::max(f_dev, std::abs(map.nodal[0][v].x - fine.nodes[v].x));
        f_dev = std::max(f_dev, std::abs(map.nodal[0][v].y - fine.nodes[v].y));
    }
    const CoarseSpace space(4, map, fine);
    const CoarseTrajectory ms = run_coarse_solver(space, ident, one, 0.5, 8);
    // plain Galerkin on the coarse mesh
    const Mesh& coarse = space.coarse_mesh();
    const int nd = coarse.n_interior;
    const SparseMatrix Ms = assemble_mass(coarse);
    const SparseMatrix As = assemble_stiffness(coarse, ident, 0.0);
    DenseMatrix M(nd, nd), lhs(nd, nd);
    for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) {
            M(i, j) = Ms.coeff(i, j);
            lhs(i, j) = Ms.coeff(i, j) + (0.5 / 8.0) * As.coeff(i, j);
        }
    std::vector<double> c(nd, 0.0);
    double dev_a = 0.0;
    for (int k = 1; k <= 8; ++k) {
        std::vector<double> rhs = M.matvec(c);
        const std::vector<double> b = assemble_load(coarse, one, k * 0.5 / 8.0);
        for (int i = 0; i < nd; ++i) rhs[i] += (0.5 / 8.0) * b[i];
        c = lhs.solve(rhs);
        for (int i = 0; i < nd; ++i) dev_a = std::max(dev_a, std::abs(c[i] - ms.c[k][i]));
    }

    // (b) time-independent medium: one implicit step is a coarse backward
    // Euler step with the reduced matrices
    const Medium perc = Medium::site_percolation(fine, 19);
    const HarmonicMap pmap = evolve_F(fine, perc, 0.4, 20);
    const CoarseSpace pspace(8, pmap, fine);
    const PhiMatrix& phi = pspace.phi(0);
    const DenseMatrix Mc = triple_product(phi, assemble_mass(fine), phi);
    const DenseMatrix Ac = triple_product(phi, assemble_stiffness(fine, perc, 0.0), phi);
    const CounterRng rng(6);
    std::vector<double> c0(pspace.n_dof());
    for (int i = 0; i < pspace.n_dof(); ++i) c0[i] = rng.uniform(-1.0, 1.0, i);
    const std::vector<double> stepped = implicit_coarse_step(pspace, perc, one, c0, 0, 5);
    DenseMatrix plhs = Mc;
    DenseMatrix dA = Ac;
    plhs += dA.scale(0.1);
    std::vector<double> prhs = Mc.matvec(c0);
    const std::vector<double> bc = phi.multiply_transposed(assemble_load(fine, one, 0.1));
    for (int i = 0; i < pspace.n_dof(); ++i) prhs[i] += 0.1 * bc[i];
    const std::vector<double> oracle = plhs.solve(prhs);
    double dev_b = 0.0;
    for (int i = 0; i < pspace.n_dof(); ++i)
        dev_b = std::max(dev_b, std::abs(stepped[i] - oracle[i]));

    const bool ok = f_dev <= 1e-10 && dev_a <= 1e-10 && dev_b <= 1e-12;
    report(7, ok,
           fmt("reductions: |F - id| %.2g (<= 1e-10), multiscale vs coarse Galerkin %.2g "
               "(<= 1e-10), implicit step vs backward Euler %.2g (<= 1e-12)",
               f_dev, dev_a, dev_b));
}

// ---- criterion 8: Cordes arithmetic ---------------------------------------

void criterion_8() {
    auto beta_of = [](double a11, double a12, double a22) {
        SigmaField f;
        f.levels = {0};
        f.per_level = {{SymTensor2{a11, a12, a22}}};
        return f;
    };
    const double b_id = cordes_beta(beta_of(1, 0, 1));
    const double b_12 = cordes_beta(beta_of(1, 0, 2));
    const CordesReport r = check_condition_1_1(beta_of(1, 0, 1));
    const bool ok = std::abs(b_id) <= 1e-12 && std::abs(b_12 - 0.2) <= 1e-12 &&
                    std::abs(r.delta - 1.0) <= 1e-12 && std::abs(r.epsilon - 0.5) <= 1e-12 &&
                    std::abs(r.lhs - 1.0 / 3.0) <= 1e-12 && r.condition_1_1;
    report(8, ok,
           fmt("beta(I) = %.2g, beta(diag(1,2)) = %.12g, delta %.12g eps %.12g lhs %.12g",
               b_id, b_12, r.delta, r.epsilon, r.lhs));
}

// ---- criterion 9: oracle equivalence --------------------------------------

void criterion_9() {
    // hand-computed two-triangle matrices
    const Mesh mesh1 = build_uniform_mesh(1);
    const SparseMatrix k = assemble_stiffness_full(mesh1, Medium::identity(), 0.0);
    const SparseMatrix m = assemble_mass_full(mesh1);
    double dev_asm = 0.0;
    double trace = 0.0, mass = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) {
            row += k.coeff(i, j);
            mass += m.coeff(i, j);
        }
        dev_asm = std::max(dev_asm, std::abs(row));  // constants in the kernel
        trace += k.coeff(i, i);
    }
    dev_asm = std::max(dev_asm, std::abs(trace - 4.0));
    dev_asm = std::max(dev_asm, std::abs(mass - 4.0));
    dev_asm = std::max(dev_asm, std::abs(m.coeff(0, 0) - 2.0 / 3.0));

    // sparse PCG vs dense LU on a random 50x50 SPD system
    const CounterRng rng(99);
    std::vector<Triplet> trips;
    DenseMatrix d(50, 50);
    for (int i = 0; i < 50; ++i) {
        for (int j = i + 1; j < 50; ++j)
            if (rng.uniform01(i, j) < 0.12) {
                const double v = rng.uniform(-1.0, 1.0, i, j, 1);
                trips.push_back({i, j, v});
                trips.push_back({j, i, v});
                d(i, j) = d(j, i) = v;
            }
        const double diag = 8.0 + rng.uniform01(i, i);
        trips.push_back({i, i, diag});
        d(i, i) = diag;
    }
    const SparseMatrix a = SparseMatrix::from_triplets(50, std::move(trips), true);
    std::vector<double> b(50);
    for (int i = 0; i < 50; ++i) b[i] = rng.uniform(-2.0, 2.0, i, 7);
    const std::vector<double> x = sparse_solve(a, b);
    const std::vector<double> y = d.solve(b);
    double dev_solve = 0.0;
    for (int i = 0; i < 50; ++i) dev_solve = std::max(dev_solve, std::abs(x[i] - y[i]));

    // stratified medium: the 1D-quadrature profile is discrete-harmonic, so
    // the solver with matching boundary data reproduces it; the identity
    // boundary condition instead pins the second component to y exactly
    const Mesh mesh = build_uniform_mesh(32);
    const Medium strat = Medium::custom(
        [](Vec2 p, double) { return TensorSample{p.x < 0.0 ? 1.0 : 4.0, 0.0, 1.0}; }, false);
    const auto profile = [](double x) {
        const double pre = x < 0.0 ? (x + 1.0) : 1.0 + 0.25 * x;
        return -1.0 + 2.0 * pre / 1.25;
    };
    const SparseMatrix a_full = assemble_stiffness_full(mesh, strat, 0.0);
    const SparseMatrix a_in = restrict_matrix_interior(mesh, a_full);
    std::vector<double> bdata(mesh.nodes.size(), 0.0);
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v)
        if (mesh.boundary_mask[v]) bdata[v] = profile(mesh.nodes[v].x);
    const std::vector<double> ab = a_full.matvec(bdata);
    std::vector<double> rhs(mesh.n_interior);
    for (int i = 0; i < mesh.n_interior; ++i) rhs[i] = -ab[mesh.interior_nodes[i]];
    const std::vector<double> g = sparse_solve(a_in, rhs);
    double dev_strat = 0.0;
    for (int i = 0; i < mesh.n_interior; ++i)
        dev_strat = std::max(dev_strat,
                             std::abs(g[i] - profile(mesh.nodes[mesh.interior_nodes[i]].x)));
    const HarmonicMap smap = solve_F_elliptic(mesh, strat);
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v)
        dev_strat = std::max(dev_strat, std::abs(smap.nodal[0][v].y - mesh.nodes[v].y));

    const bool ok = dev_asm <= 1e-12 && dev_solve <= 1e-8 && dev_strat <= 1e-6;
    report(9, ok,
           fmt("oracles: assembly %.2g (<= 1e-12), sparse vs dense %.2g (<= 1e-8), stratified "
               "profile %.2g (<= 1e-6)",
               dev_asm, dev_solve, dev_strat));
}

}  // namespace

int main() {
    std::printf("running acceptance pipelines (several minutes)...\n");
    std::fflush(stdout);

    ExperimentConfig trig128_cfg = base_config("trig_multiscale", 128, 0.1, {4, 8});
    const RunResult trig128 = run_experiment(trig128_cfg);
    ExperimentConfig trig64_cfg = base_config("trig_multiscale", 64, 0.1, {4, 8});
    const RunResult trig64 = run_experiment(trig64_cfg);

    ExperimentConfig perc_cfg = base_config("percolation", 128, 1.0, {4, 8, 16});
    perc_cfg.seed = 3;
    perc_cfg.diagnostics.compensation = true;
    const RunResult perc128 = run_experiment(perc_cfg);

    ExperimentConfig ident_cfg = base_config("identity", 64, 1.0, {8});
    const RunResult ident = run_experiment(ident_cfg);

    ExperimentConfig chan_cfg = base_config("channel", 32, 1.0, {4, 8});
    const RunResult chan = run_experiment(chan_cfg);
    ExperimentConfig four_cfg = base_config("fourier_modes", 32, 1.0, {4, 8});
    const RunResult four = run_experiment(four_cfg);
    ExperimentConfig frac_cfg = base_config("fractal", 32, 1.0, {4, 8});
    const RunResult frac = run_experiment(frac_cfg);

    criterion_1(trig128, trig64);
    criterion_2(perc128);
    criterion_3();
    criterion_4();
    criterion_5(ident, {&trig128, &trig64, &perc128, &chan, &four, &frac});
    criterion_6(perc128);
    criterion_7();
    criterion_8();
    criterion_9();

    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures;
}
