#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parhom/diagnostics.hpp"
#include "parhom/fem.hpp"
#include "parhom/harmonic.hpp"
#include "parhom/media.hpp"
#include "parhom/metrics.hpp"
#include "parhom/upscale.hpp"

namespace parhom {

struct DiagnosticsToggles {
    bool cordes = true;
    bool compensation = false;
    bool det_check = true;
};

struct ExperimentConfig {
    std::string medium_family = "percolation";
    std::uint64_t seed = 1;
    int fine_n = 64;
    std::vector<int> coarse_n = {4, 8, 16};
    double T = 1.0;
    int n_fine_steps = 0;   // 0: Dt = 1.2e-4 * 128 / fine_n
    int coarse_steps = 0;   // 0: about n_fine_steps / 20
    std::string source = "one";  // or "travelling_sine"
    std::string output_dir;      // empty: no files written
    DiagnosticsToggles diagnostics;
    double solver_tol = 1e-10;
    std::string coarse_element = "p1";
    std::vector<std::string> dumps;  // subset of u,u_comp,grad_u,grad_u_comp,F,a

    void validate() const;  // throws ConfigError
    // resolved step counts (coarse boundaries land on fine levels)
    void resolve_steps(int& n_fine, int& m_steps) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& json_text);
std::string config_json(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

SourceFn make_source(const std::string& name);
Medium make_medium(const ExperimentConfig& cfg, const Mesh& mesh);

struct CoarseRunResult {
    int coarse_n = 0;
    int dofs = 0;
    std::vector<double> times;  // coarse boundaries with recorded errors
    std::vector<ErrorNorms> fine_series;
    std::vector<ErrorNorms> coarse_series;
    ErrorNorms final_fine;
    ErrorNorms final_coarse;
    bool has_semidiscrete = false;
    ErrorNorms semidiscrete_final_fine;
    double stability_c = 0.0;  // observed per-step energy constant
    double compression = 0.0;
};

struct RunResult {
    ExperimentConfig config;
    int n_fine = 0;
    int m_steps = 0;
    double lambda_min = 1.0;
    double min_det = 1.0;
    std::vector<int> degenerate_levels;
    bool has_cordes = false;
    CordesReport cordes;
    bool has_compensation = false;
    double compensation = -1.0;
    std::string diagnostics_error;  // nonempty if a diagnostic failed
    std::vector<CoarseRunResult> coarse;
    double wall_seconds = 0.0;
};

// Full pipeline: medium -> fine reference -> F -> diagnostics -> coarse
// solves per n_c -> errors; writes tables/manifest when output_dir is set.
RunResult run_experiment(const ExperimentConfig& cfg);

struct SuiteOptions {
    int fine_n = 64;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
};

// canonical configs per named example; "all" runs every family
std::vector<RunResult> run_suite(const std::string& name, const SuiteOptions& opts);

// uniform-grid CSV dumps of the requested fields at the final time
void emit_field_dumps(const Mesh& mesh, const Trajectory& fine, const HarmonicMap& map,
                      const Medium& medium, const std::vector<std::string>& which, int m,
                      const std::string& out_dir);

}  // namespace parhom
