#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "parhom/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kDiagnosticError = 4;

int classify(const std::exception& e) {
    if (dynamic_cast<const parhom::ConfigError*>(&e)) return kConfigError;
    return kSolverError;
}

void print_run(const parhom::RunResult& r) {
    std::printf("medium=%s seed=%llu fine_n=%d N=%d M=%d\n", r.config.medium_family.c_str(),
                static_cast<unsigned long long>(r.config.seed), r.config.fine_n, r.n_fine,
                r.m_steps);
    if (r.has_cordes)
        std::printf("cordes: beta=%.6g condition_1_1=%s\n", r.cordes.beta,
                    r.cordes.condition_1_1 ? "true" : "false");
    if (r.has_compensation) std::printf("compensation_ratio=%.6g\n", r.compensation);
    for (const auto& cr : r.coarse)
        std::printf("n_c=%d dofs=%d L2(fine)=%.6g L2(coarse)=%.6g compression=%.4g\n", cr.coarse_n,
                    cr.dofs, cr.final_fine.l2, cr.final_coarse.l2, cr.compression);
    std::printf("wall_seconds=%.2f\n", r.wall_seconds);
}

int cmd_run(const std::string& config_path) {
    const parhom::ExperimentConfig cfg = parhom::load_config(config_path);
    const parhom::RunResult r = parhom::run_experiment(cfg);
    print_run(r);
    return kOk;
}

int cmd_suite(const std::string& name, const parhom::SuiteOptions& opts, std::size_t expected) {
    const auto results = parhom::run_suite(name, opts);
    for (const auto& r : results) print_run(r);
    std::printf("suite summary: %s/summary.json\n", opts.output_dir.c_str());
    return results.size() == expected ? kOk : kSolverError;
}

int cmd_diagnose(const std::string& config_path) {
    parhom::ExperimentConfig cfg = parhom::load_config(config_path);
    int n_fine, m_steps;
    cfg.resolve_steps(n_fine, m_steps);
    const parhom::Mesh mesh = parhom::build_uniform_mesh(cfg.fine_n);
    const parhom::Medium medium = parhom::make_medium(cfg, mesh);
    const parhom::HarmonicMap map =
        parhom::evolve_F(mesh, medium, cfg.T, n_fine, cfg.solver_tol);

    bool failed = false;
    std::vector<int> levels = {0};
    if (!map.time_independent) {
        levels.push_back(n_fine / 2);
        levels.push_back(n_fine);
    }
    if (cfg.diagnostics.det_check && !map.degenerate_levels.empty()) {
        std::printf("det_check: %zu degenerate levels\n", map.degenerate_levels.size());
        failed = true;
    }
    if (cfg.diagnostics.cordes) {
        const parhom::SigmaField sigma = parhom::compute_sigma(mesh, medium, map, levels);
        const parhom::CordesReport rep = parhom::cordes_report(sigma);
        parhom::write_cordes_json(rep, std::cout);
        if (!cfg.output_dir.empty()) {
            std::filesystem::create_directories(cfg.output_dir);
            std::ofstream out(std::filesystem::path(cfg.output_dir) / "cordes.json");
            parhom::write_cordes_json(rep, out);
        }
        if (!rep.condition_1_1) failed = true;
    }
    if (cfg.diagnostics.compensation) {
        const parhom::SourceFn g = parhom::make_source(cfg.source);
        parhom::FineSolveOptions fopts;
        fopts.tol = cfg.solver_tol;
        fopts.store_stride = n_fine;
        const parhom::Trajectory fine =
            parhom::fine_reference_solve(mesh, medium, g, cfg.T, n_fine, fopts);
        try {
            const double ratio = parhom::compensation_ratio(
                mesh, fine.fields.back(), map.at_level(map.time_independent ? 0 : n_fine),
                cfg.fine_n + 1);
            std::printf("compensation_ratio=%.6g\n", ratio);
        } catch (const parhom::NonInvertibleError& e) {
            std::printf("compensation failed: %s\n", e.what());
            failed = true;
        }
    }
    return failed ? kDiagnosticError : kOk;
}

int cmd_convergence(const std::string& config_path) {
    const parhom::ExperimentConfig cfg = parhom::load_config(config_path);
    if (cfg.coarse_n.size() < 2)
        throw parhom::ConfigError("convergence requires at least two coarse_n levels");
    const parhom::RunResult r = parhom::run_experiment(cfg);
    std::vector<std::pair<int, parhom::ErrorNorms>> finals;
    for (const auto& cr : r.coarse) finals.emplace_back(cr.coarse_n, cr.final_fine);
    parhom::write_error_table_csv(parhom::convergence_table(finals), std::cout);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiscale parabolic homogenization toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run one configured experiment");
    run->add_option("--config", config_path, "JSON config file")->required();

    std::string suite_name;
    parhom::SuiteOptions sopts;
    auto* suite = app.add_subcommand("suite", "run a canonical experiment suite");
    suite->add_option("name", suite_name, "percolation|channel|trig|fourier|fractal|all")
        ->required();
    suite->add_option("--fine-n", sopts.fine_n, "fine mesh subdivisions");
    suite->add_option("--out", sopts.output_dir, "output directory");
    suite->add_option("--seed", sopts.seed, "base seed");

    auto* diagnose = app.add_subcommand("diagnose", "Cordes and compensation diagnostics only");
    diagnose->add_option("--config", config_path, "JSON config file")->required();

    auto* convergence = app.add_subcommand("convergence", "coarse dof sweep with slopes");
    convergence->add_option("--config", config_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (suite->parsed()) {
            const std::size_t expected = suite_name == "all" ? 5 : 1;
            return cmd_suite(suite_name, sopts, expected);
        }
        if (diagnose->parsed()) return cmd_diagnose(config_path);
        if (convergence->parsed()) return cmd_convergence(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return classify(e);
    }
    return kConfigError;
}
