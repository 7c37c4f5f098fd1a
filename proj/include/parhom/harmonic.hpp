#pragma once

#include <vector>

#include "parhom/fem.hpp"
#include "parhom/media.hpp"
#include "parhom/mesh.hpp"

namespace parhom {

// Harmonic coordinates F(.,t) = (F1, F2) as fine nodal values per time
// level. F equals the identity on the boundary at every level (imposed).
struct HarmonicMap {
    const Mesh* mesh = nullptr;
    bool time_independent = true;
    std::vector<double> times;  // fine level times; size 1 when time independent

    struct TriJacobian {
        double j11, j12, j21, j22;  // j_kl = d F_k / d x_l, constant per triangle
        double det;
    };

    // nodal positions at a fine level (time-independent maps store one level)
    const std::vector<Vec2>& at_level(int level) const {
        return nodal[time_independent ? 0 : level];
    }
    int n_levels() const { return static_cast<int>(times.size()); }

    std::vector<TriJacobian> jacobians(int level) const;
    double min_det(int level) const;

    // levels where det grad F <= 0 was observed during evolution
    std::vector<int> degenerate_levels;

    std::vector<std::vector<Vec2>> nodal;
};

// Elliptic harmonic coordinates (time-independent media).
HarmonicMap solve_F_elliptic(const Mesh& mesh, const Medium& medium, double tol = 1e-10);

// Elliptic solve with a(.,0); initial data for the parabolic evolution.
std::vector<Vec2> init_F0(const Mesh& mesh, const Medium& medium, double tol = 1e-10);

// Backward-Euler evolution of dF/dt = div(a grad F) on the fine grid.
// det grad F <= 0 is recorded, not fatal.
HarmonicMap evolve_F(const Mesh& mesh, const Medium& medium, double T, int n_fine,
                     double tol = 1e-10);

// Locate queries in the image triangulation (nodes at F(node)). The result
// is a PointLocation whose barycentric weights, applied to nodal values of
// u, evaluate u o F^{-1}. Throws NonInvertibleError if det grad F <= 0.
std::vector<PointLocation> invert_map(const Mesh& mesh, const std::vector<Vec2>& f_level,
                                      std::span<const Vec2> queries);

// CSV `t,node_id,F1,F2` plus a per-triangle det section
void export_map_csv(const Mesh& mesh, const HarmonicMap& map, std::ostream& out);

}  // namespace parhom
