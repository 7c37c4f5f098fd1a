#include "parhom/harmonic.hpp"

#include <cmath>
#include <cstdio>

namespace parhom {

std::vector<HarmonicMap::TriJacobian> HarmonicMap::jacobians(int level) const {
    const std::vector<Vec2>& f = at_level(level);
    std::vector<TriJacobian> out(mesh->triangles.size());
    for (std::size_t k = 0; k < mesh->triangles.size(); ++k) {
        const auto& tri = mesh->triangles[k];
        TriJacobian j{0, 0, 0, 0, 0};
        for (int v = 0; v < 3; ++v) {
            const Vec2 g = mesh->tri_grad[k][v];
            j.j11 += g.x * f[tri[v]].x;
            j.j12 += g.y * f[tri[v]].x;
            j.j21 += g.x * f[tri[v]].y;
            j.j22 += g.y * f[tri[v]].y;
        }
        j.det = j.j11 * j.j22 - j.j12 * j.j21;
        out[k] = j;
    }
    return out;
}

double HarmonicMap::min_det(int level) const {
    double mn = 1e300;
    for (const auto& j : jacobians(level)) mn = std::min(mn, j.det);
    return mn;
}

namespace {

// interior restriction of A_full * (coordinate component)
std::vector<double> boundary_forcing(const Mesh& mesh, const SparseMatrix& a_full, int comp) {
    std::vector<double> x(mesh.nodes.size());
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v)
        x[v] = comp == 0 ? mesh.nodes[v].x : mesh.nodes[v].y;
    const std::vector<double> ax = a_full.matvec(x);
    std::vector<double> r = restrict_interior(mesh, ax);
    for (double& v : r) v = -v;
    return r;
}

std::vector<Vec2> combine(const Mesh& mesh, std::span<const double> g1, std::span<const double> g2) {
    std::vector<Vec2> f(mesh.nodes.size());
    const std::vector<double> f1 = extend_interior(mesh, g1);
    const std::vector<double> f2 = extend_interior(mesh, g2);
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v)
        f[v] = {mesh.nodes[v].x + f1[v], mesh.nodes[v].y + f2[v]};
    return f;
}

}  // namespace

std::vector<Vec2> init_F0(const Mesh& mesh, const Medium& medium, double tol) {
    const SparseMatrix A_full = assemble_stiffness_full(mesh, medium, 0.0);
    const SparseMatrix A = restrict_matrix_interior(mesh, A_full);
    SolveOptions so;
    so.tol = tol;
    const std::vector<double> g1 = sparse_solve(A, boundary_forcing(mesh, A_full, 0), so);
    const std::vector<double> g2 = sparse_solve(A, boundary_forcing(mesh, A_full, 1), so);
    return combine(mesh, g1, g2);
}

HarmonicMap solve_F_elliptic(const Mesh& mesh, const Medium& medium, double tol) {
    if (medium.time_dependent())
        throw ConfigError("solve_F_elliptic: medium must be time independent");
    HarmonicMap map;
    map.mesh = &mesh;
    map.time_independent = true;
    map.times = {0.0};
    map.nodal.push_back(init_F0(mesh, medium, tol));
    return map;
}

HarmonicMap evolve_F(const Mesh& mesh, const Medium& medium, double T, int n_fine, double tol) {
    if (!medium.time_dependent()) {
        HarmonicMap map = solve_F_elliptic(mesh, medium, tol);
        map.times.resize(n_fine + 1);
        for (int k = 0; k <= n_fine; ++k) map.times[k] = k * T / n_fine;
        return map;
    }
    const double dt = T / n_fine;
    HarmonicMap map;
    map.mesh = &mesh;
    map.time_independent = false;
    map.times.resize(n_fine + 1);
    for (int k = 0; k <= n_fine; ++k) map.times[k] = k * dt;
    map.nodal.reserve(n_fine + 1);
    map.nodal.push_back(init_F0(mesh, medium, tol));

    const SparseMatrix M = assemble_mass(mesh);
    // G = F - x with homogeneous Dirichlet data
    std::vector<double> g1(mesh.n_interior), g2(mesh.n_interior);
    for (int dof = 0; dof < mesh.n_interior; ++dof) {
        const int v = mesh.interior_nodes[dof];
        g1[dof] = map.nodal[0][v].x - mesh.nodes[v].x;
        g2[dof] = map.nodal[0][v].y - mesh.nodes[v].y;
    }
    for (int k = 1; k <= n_fine; ++k) {
        const double t = k * dt;
        const SparseMatrix A_full = assemble_stiffness_full(mesh, medium, t);
        const SparseMatrix A = restrict_matrix_interior(mesh, A_full);
        const SparseMatrix S = sparse_axpby(1.0, M, dt, A);
        for (int comp = 0; comp < 2; ++comp) {
            std::vector<double>& g = comp == 0 ? g1 : g2;
            std::vector<double> rhs = M.matvec(g);
            const std::vector<double> f = boundary_forcing(mesh, A_full, comp);
            for (int i = 0; i < mesh.n_interior; ++i) rhs[i] += dt * f[i];
            SolveOptions so;
            so.tol = tol;
            so.initial = g.data();
            g = sparse_solve(S, rhs, so);
        }
        map.nodal.push_back(combine(mesh, g1, g2));
        if (map.min_det(k) <= 0.0) map.degenerate_levels.push_back(k);
    }
    return map;
}

std::vector<PointLocation> invert_map(const Mesh& mesh, const std::vector<Vec2>& f_level,
                                      std::span<const Vec2> queries) {
    // orientation check on the image triangles
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        const Vec2 a = f_level[t[0]], b = f_level[t[1]], c = f_level[t[2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        if (det <= 0.0) {
            char msg[96];
            std::snprintf(msg, sizeof(msg), "invert_map: det grad F <= 0 on triangle %zu", k);
            throw NonInvertibleError(msg);
        }
    }
    const TriLocator locator(mesh, f_level);
    std::vector<PointLocation> out;
    out.reserve(queries.size());
    for (const Vec2& q : queries) out.push_back(locator.locate(q));
    return out;
}

void export_map_csv(const Mesh& mesh, const HarmonicMap& map, std::ostream& out) {
    out << "t,node_id,F1,F2\n";
    char buf[128];
    for (std::size_t s = 0; s < map.nodal.size(); ++s) {
        const double t = map.times[std::min(s, map.times.size() - 1)];
        for (std::size_t v = 0; v < map.nodal[s].size(); ++v) {
            std::snprintf(buf, sizeof(buf), "%.12g,%zu,%.12g,%.12g\n", t, v, map.nodal[s][v].x,
                          map.nodal[s][v].y);
            out << buf;
        }
    }
    out << "t,triangle_id,det\n";
    for (std::size_t s = 0; s < map.nodal.size(); ++s) {
        const double t = map.times[std::min(s, map.times.size() - 1)];
        const auto jac = map.jacobians(static_cast<int>(s));
        for (std::size_t k = 0; k < jac.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.12g,%zu,%.12g\n", t, k, jac[k].det);
            out << buf;
        }
    }
}

}  // namespace parhom
