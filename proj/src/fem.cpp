#include "parhom/fem.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace parhom {

namespace {

void element_stiffness(const Mesh& mesh, int k, const TensorSample& a, double ke[3][3]) {
    const double area = mesh.tri_area[k];
    for (int v = 0; v < 3; ++v) {
        const Vec2 gv = mesh.tri_grad[k][v];
        const Vec2 agv{a.a11 * gv.x + a.a12 * gv.y, a.a12 * gv.x + a.a22 * gv.y};
        for (int w = 0; w < 3; ++w) {
            const Vec2 gw = mesh.tri_grad[k][w];
            ke[v][w] = area * (agv.x * gw.x + agv.y * gw.y);
        }
    }
}

SparseMatrix assemble_stiffness_impl(const Mesh& mesh, const Medium& medium, double t,
                                     bool interior_only) {
    std::vector<Triplet> trip;
    trip.reserve(9 * mesh.triangles.size());
    double ke[3][3];
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const TensorSample a = medium.sample(mesh.centroid(static_cast<int>(k)), t);
        if (!a.spd()) {
            char msg[96];
            std::snprintf(msg, sizeof(msg), "assemble_stiffness: non-SPD tensor on triangle %zu",
                          k);
            throw NonSPDCoefficientError(msg);
        }
        element_stiffness(mesh, static_cast<int>(k), a, ke);
        const auto& tri = mesh.triangles[k];
        for (int v = 0; v < 3; ++v) {
            for (int w = 0; w < 3; ++w) {
                int r = tri[v], c = tri[w];
                if (interior_only) {
                    r = mesh.node_to_interior[r];
                    c = mesh.node_to_interior[c];
                    if (r < 0 || c < 0) continue;
                }
                trip.push_back({r, c, ke[v][w]});
            }
        }
    }
    const int n = interior_only ? mesh.n_interior : static_cast<int>(mesh.nodes.size());
    return SparseMatrix::from_triplets(n, std::move(trip), true);
}

SparseMatrix assemble_mass_impl(const Mesh& mesh, bool interior_only) {
    std::vector<Triplet> trip;
    trip.reserve(9 * mesh.triangles.size());
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const double m = mesh.tri_area[k] / 12.0;
        const auto& tri = mesh.triangles[k];
        for (int v = 0; v < 3; ++v) {
            for (int w = 0; w < 3; ++w) {
                int r = tri[v], c = tri[w];
                if (interior_only) {
                    r = mesh.node_to_interior[r];
                    c = mesh.node_to_interior[c];
                    if (r < 0 || c < 0) continue;
                }
                trip.push_back({r, c, v == w ? 2.0 * m : m});
            }
        }
    }
    const int n = interior_only ? mesh.n_interior : static_cast<int>(mesh.nodes.size());
    return SparseMatrix::from_triplets(n, std::move(trip), true);
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const Medium& medium, double t) {
    return assemble_stiffness_impl(mesh, medium, t, true);
}

SparseMatrix assemble_stiffness_full(const Mesh& mesh, const Medium& medium, double t) {
    return assemble_stiffness_impl(mesh, medium, t, false);
}

SparseMatrix restrict_matrix_interior(const Mesh& mesh, const SparseMatrix& full) {
    std::vector<Triplet> trip;
    trip.reserve(full.nnz());
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v) {
        const int r = mesh.node_to_interior[v];
        if (r < 0) continue;
        for (int k = full.row_ptr()[v]; k < full.row_ptr()[v + 1]; ++k) {
            const int c = mesh.node_to_interior[full.col_idx()[k]];
            if (c >= 0) trip.push_back({r, c, full.values()[k]});
        }
    }
    return SparseMatrix::from_triplets(mesh.n_interior, std::move(trip), full.symmetric());
}

SparseMatrix assemble_mass(const Mesh& mesh) { return assemble_mass_impl(mesh, true); }

SparseMatrix assemble_mass_full(const Mesh& mesh) { return assemble_mass_impl(mesh, false); }

std::vector<double> assemble_load(const Mesh& mesh, const SourceFn& g, double t) {
    std::vector<double> b(mesh.n_interior, 0.0);
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const double third = mesh.tri_area[k] / 3.0;
        for (int v : mesh.triangles[k]) {
            const int dof = mesh.node_to_interior[v];
            if (dof >= 0) b[dof] += third * g(mesh.nodes[v], t);
        }
    }
    return b;
}

int Trajectory::stored_index(int level) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == level) return static_cast<int>(i);
    return -1;
}

namespace {

double source_l2(const Mesh& mesh, const SourceFn& g, double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const double third = mesh.tri_area[k] / 3.0;
        for (int v : mesh.triangles[k]) {
            const double gv = g(mesh.nodes[v], t);
            s += third * gv * gv;
        }
    }
    return std::sqrt(s);
}

double m_norm(const SparseMatrix& M, std::span<const double> u) {
    const std::vector<double> mu = M.matvec(u);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * mu[i];
    return std::sqrt(std::max(s, 0.0));
}

}  // namespace

Trajectory fine_reference_solve(const Mesh& mesh, const Medium& medium, const SourceFn& g,
                                double T, int n_fine, const FineSolveOptions& opts) {
    if (n_fine < 1) throw ConfigError("fine_reference_solve: N_fine must be >= 1");
    const double dt = T / n_fine;
    const SparseMatrix M = assemble_mass(mesh);
    SparseMatrix A, S;
    if (!medium.time_dependent()) {
        A = assemble_stiffness(mesh, medium, 0.0);
        S = sparse_axpby(1.0, M, dt, A);
    }

    Trajectory traj;
    traj.dt = dt;
    auto store = [&](int level, const std::vector<double>& interior) {
        traj.levels.push_back(level);
        traj.times.push_back(level * dt);
        traj.fields.push_back(extend_interior(mesh, interior));
    };

    std::vector<double> u(mesh.n_interior, 0.0);
    store(0, u);
    double unorm = 0.0;
    for (int k = 1; k <= n_fine; ++k) {
        const double t = k * dt;
        if (medium.time_dependent()) {
            A = assemble_stiffness(mesh, medium, t);
            S = sparse_axpby(1.0, M, dt, A);
        }
        std::vector<double> rhs = M.matvec(u);
        const std::vector<double> b = assemble_load(mesh, g, t);
        for (int i = 0; i < mesh.n_interior; ++i) rhs[i] += dt * b[i];
        SolveOptions so;
        so.tol = opts.tol;
        so.initial = u.data();
        u = sparse_solve(S, rhs, so);

        // discrete energy stability of the implicit step
        const double unorm_next = m_norm(M, u);
        const double bound = unorm + dt * source_l2(mesh, g, t);
        if (unorm_next > bound * (1.0 + 1e-9) + 1e-14)
            throw std::logic_error("fine_reference_solve: energy stability violated");
        unorm = unorm_next;

        if (k % opts.store_stride == 0 || k == n_fine) store(k, u);
    }
    return traj;
}

double l2_norm(const Mesh& mesh, std::span<const double> full_nodal) {
    // consistent mass quadrature, exact for P1 fields
    double s = 0.0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& tri = mesh.triangles[k];
        const double m = mesh.tri_area[k] / 12.0;
        for (int v = 0; v < 3; ++v)
            for (int w = 0; w < 3; ++w)
                s += (v == w ? 2.0 : 1.0) * m * full_nodal[tri[v]] * full_nodal[tri[w]];
    }
    return std::sqrt(std::max(s, 0.0));
}

std::vector<double> extend_interior(const Mesh& mesh, std::span<const double> interior) {
    std::vector<double> full(mesh.nodes.size(), 0.0);
    for (int dof = 0; dof < mesh.n_interior; ++dof) full[mesh.interior_nodes[dof]] = interior[dof];
    return full;
}

std::vector<double> restrict_interior(const Mesh& mesh, std::span<const double> full_nodal) {
    std::vector<double> interior(mesh.n_interior);
    for (int dof = 0; dof < mesh.n_interior; ++dof)
        interior[dof] = full_nodal[mesh.interior_nodes[dof]];
    return interior;
}

void export_trajectory_csv(const Mesh& mesh, const Trajectory& traj, std::ostream& out) {
    out << "time,node_id,value\n";
    char buf[96];
    for (std::size_t s = 0; s < traj.fields.size(); ++s) {
        for (std::size_t v = 0; v < traj.fields[s].size(); ++v) {
            std::snprintf(buf, sizeof(buf), "%.12g,%zu,%.12g\n", traj.times[s], v,
                          traj.fields[s][v]);
            out << buf;
        }
    }
}

}  // namespace parhom
