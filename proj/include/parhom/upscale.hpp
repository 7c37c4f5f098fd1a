#pragma once

#include <memory>
#include <ostream>
#include <vector>

#include "parhom/fem.hpp"
#include "parhom/harmonic.hpp"
#include "parhom/media.hpp"
#include "parhom/mesh.hpp"
#include "parhom/sparse.hpp"

namespace parhom {

// Composed basis matrix Phi(t): fine-interior-node x coarse-interior-dof,
// row j holds the barycentric weights of F(x_j, t) in its coarse triangle.
// Rows are stored sparsely (at most 3 entries).
struct PhiMatrix {
    struct Row {
        int ncols = 0;
        int cols[3] = {-1, -1, -1};  // coarse interior dof ids
        double w[3] = {0, 0, 0};
    };
    std::vector<Row> rows;
    int n_cols = 0;

    std::vector<double> multiply(std::span<const double> c) const;            // Phi c
    std::vector<double> multiply_transposed(std::span<const double> v) const;  // Phi^T v
};

// Phi^T K Psi for an interior-dof sparse K
DenseMatrix triple_product(const PhiMatrix& phi, const SparseMatrix& k, const PhiMatrix& psi);

// Coarse space V_h(t) = { phi o F(.,t) } on a nested coarse triangulation.
class CoarseSpace {
public:
    CoarseSpace(int n_coarse, const HarmonicMap& map, const Mesh& fine);

    const Mesh& coarse_mesh() const { return coarse_; }
    const Mesh& fine_mesh() const { return *fine_; }
    const HarmonicMap& harmonic_map() const { return *map_; }
    int n_dof() const { return coarse_.n_interior; }
    int n_fine_levels() const { return map_->n_levels(); }
    double fine_dt() const;

    // Phi at a fine time level (cached; constant map caches a single matrix)
    const PhiMatrix& phi(int level) const;

private:
    PhiMatrix build_phi(int level) const;

    Mesh coarse_;
    const Mesh* fine_;
    const HarmonicMap* map_;
    std::unique_ptr<TriLocator> locator_;
    mutable int cached_level_[2] = {-1, -1};
    mutable PhiMatrix cache_[2];
    mutable int cache_next_ = 0;
};

struct CoarseTrajectory {
    double dt = 0.0;                     // coarse step
    std::vector<double> times;           // coarse boundaries, 0..T
    std::vector<std::vector<double>> c;  // coefficients per boundary, c[0] = 0
};

// Galerkin-reduced semidiscrete system (Eq-level reference for the time
// scheme); requires a time-independent medium so Phi is constant.
CoarseTrajectory solve_coarse_semidiscrete(const CoarseSpace& space, const Medium& medium,
                                           const SourceFn& g, double T, int n_sub);

// One implicit coarse step over fine levels (level_n, level_np1].
std::vector<double> implicit_coarse_step(const CoarseSpace& space, const Medium& medium,
                                         const SourceFn& g, std::span<const double> c_n,
                                         int level_n, int level_np1);

// M implicit coarse steps from c = 0; fine level count must be divisible by M.
CoarseTrajectory run_coarse_solver(const CoarseSpace& space, const Medium& medium,
                                   const SourceFn& g, double T, int m_steps);

// fine nodal reconstruction Phi(level) c, zero on the fine boundary
std::vector<double> reconstruct(const CoarseSpace& space, std::span<const double> c, int level);

// CSV `coarse_step,dof_id,coefficient`
void export_coarse_trajectory_csv(const CoarseTrajectory& traj, std::ostream& out);

}  // namespace parhom
