#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "parhom/media.hpp"
#include "parhom/mesh.hpp"
#include "parhom/sparse.hpp"

namespace parhom {

using SourceFn = std::function<double(Vec2, double)>;

// Stiffness a[phi_i, phi_j] with a sampled at triangle centroids.
// Interior-dof indexing; throws NonSPDCoefficientError on a bad sample.
SparseMatrix assemble_stiffness(const Mesh& mesh, const Medium& medium, double t);
// Same entries over all nodes (no boundary elimination); used for the
// inhomogeneous boundary data of the harmonic map solves and for checks.
SparseMatrix assemble_stiffness_full(const Mesh& mesh, const Medium& medium, double t);

// interior-dof submatrix of an all-nodes matrix
SparseMatrix restrict_matrix_interior(const Mesh& mesh, const SparseMatrix& full);

// Consistent P1 mass matrix, interior dofs / all nodes.
SparseMatrix assemble_mass(const Mesh& mesh);
SparseMatrix assemble_mass_full(const Mesh& mesh);

// Load vector with vertex quadrature (exact for P1 sources), interior dofs.
std::vector<double> assemble_load(const Mesh& mesh, const SourceFn& g, double t);

// Backward-Euler trajectory of the fine problem. Fields are full nodal
// vectors with exact zeros on the boundary; only every `store_stride`-th
// level (plus the final one) is kept.
struct Trajectory {
    double dt = 0.0;
    std::vector<int> levels;
    std::vector<double> times;
    std::vector<std::vector<double>> fields;

    // stored index of a fine level, -1 if not kept
    int stored_index(int level) const;
};

struct FineSolveOptions {
    double tol = 1e-10;
    int store_stride = 1;
};

Trajectory fine_reference_solve(const Mesh& mesh, const Medium& medium, const SourceFn& g,
                                double T, int n_fine, const FineSolveOptions& opts = {});

// L2 norm of a P1 nodal field (consistent mass quadrature)
double l2_norm(const Mesh& mesh, std::span<const double> full_nodal);

// scatter interior dof vector into a full nodal vector (zero boundary)
std::vector<double> extend_interior(const Mesh& mesh, std::span<const double> interior);
std::vector<double> restrict_interior(const Mesh& mesh, std::span<const double> full_nodal);

// CSV `time,node_id,value`
void export_trajectory_csv(const Mesh& mesh, const Trajectory& traj, std::ostream& out);

}  // namespace parhom
