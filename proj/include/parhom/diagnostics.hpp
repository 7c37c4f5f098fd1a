#pragma once

#include <ostream>
#include <vector>

#include "parhom/harmonic.hpp"
#include "parhom/media.hpp"
#include "parhom/mesh.hpp"

namespace parhom {

struct SymTensor2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    double trace() const { return a11 + a22; }
    double trace_sq() const { return a11 * a11 + 2.0 * a12 * a12 + a22 * a22; }  // Trace(s^T s)
    double lambda_min() const;
    double lambda_max() const;
};

// sigma = (grad F)^T a (grad F), piecewise constant per triangle, at a set
// of time levels of the harmonic map.
struct SigmaField {
    std::vector<int> levels;                         // fine levels sampled
    std::vector<std::vector<SymTensor2>> per_level;  // [sample][triangle]
};

SigmaField compute_sigma(const Mesh& mesh, const Medium& medium, const HarmonicMap& map,
                         const std::vector<int>& levels);
// single-level convenience
std::vector<SymTensor2> compute_sigma_level(const Mesh& mesh, const Medium& medium,
                                            const HarmonicMap& map, int level);

// Cordes parameter: max over triangles/levels of n - (Trace s)^2 / Trace(s^T s)
double cordes_beta(const SigmaField& sigma);

struct AnisotropyStats {
    double mu = 1.0;  // max eigenvalue ratio
    double z = 1.0;   // max of n Trace(s^T s) / (Trace s)^2
    double y = 1.0;   // (max Trace s) * (max 1/Trace s)
};

AnisotropyStats anisotropy_stats(const SigmaField& sigma);

struct CordesReport {
    double beta = 0.0;
    double mu = 1.0;
    double z = 1.0;
    double y = 1.0;
    double delta = 0.0;      // n * max(1/Trace sigma)
    double epsilon = 0.0;    // (2 n y - n) / (2 n y^2)
    double lhs = 0.0;        // max (delta^2 Trace(s^T s) + 1) / (delta Trace s + 1)^2
    bool condition_1_1 = false;  // lhs <= 1/(n + epsilon)
    bool proviso = false;        // z <= 1 + epsilon/n
    int worst_triangle = -1;     // argmax of the lhs
    int worst_level = -1;
};

CordesReport check_condition_1_1(const SigmaField& sigma);
// full report (beta + anisotropy + condition)
CordesReport cordes_report(const SigmaField& sigma);

void write_cordes_json(const CordesReport& report, std::ostream& out);
// per-triangle beta at the first sampled level, CSV for heatmaps
void write_beta_csv(const Mesh& mesh, const SigmaField& sigma, std::ostream& out);

// Compensation diagnostic: ratio of discrete H2 seminorm energies of
// u o F^{-1} and u, resampled on an m x m grid with a 2-cell boundary margin.
double compensation_ratio(const Mesh& mesh, std::span<const double> u_full,
                          const std::vector<Vec2>& f_level, int m);

}  // namespace parhom
