#include "parhom/upscale.hpp"

#include <cmath>
#include <cstdio>

namespace parhom {

std::vector<double> PhiMatrix::multiply(std::span<const double> c) const {
    std::vector<double> out(rows.size(), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double s = 0.0;
        for (int k = 0; k < rows[r].ncols; ++k) s += rows[r].w[k] * c[rows[r].cols[k]];
        out[r] = s;
    }
    return out;
}

std::vector<double> PhiMatrix::multiply_transposed(std::span<const double> v) const {
    std::vector<double> out(n_cols, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int k = 0; k < rows[r].ncols; ++k) out[rows[r].cols[k]] += rows[r].w[k] * v[r];
    return out;
}

DenseMatrix triple_product(const PhiMatrix& phi, const SparseMatrix& k, const PhiMatrix& psi) {
    DenseMatrix out(phi.n_cols, psi.n_cols);
    for (int r = 0; r < k.dim(); ++r) {
        const PhiMatrix::Row& pr = phi.rows[r];
        if (pr.ncols == 0) continue;
        for (int e = k.row_ptr()[r]; e < k.row_ptr()[r + 1]; ++e) {
            const PhiMatrix::Row& pc = psi.rows[k.col_idx()[e]];
            const double v = k.values()[e];
            for (int i = 0; i < pr.ncols; ++i)
                for (int j = 0; j < pc.ncols; ++j)
                    out(pr.cols[i], pc.cols[j]) += pr.w[i] * v * pc.w[j];
        }
    }
    return out;
}

CoarseSpace::CoarseSpace(int n_coarse, const HarmonicMap& map, const Mesh& fine)
    : coarse_(build_uniform_mesh(n_coarse)), fine_(&fine), map_(&map) {
    locator_ = std::make_unique<TriLocator>(coarse_);
}

double CoarseSpace::fine_dt() const {
    return map_->times.size() > 1 ? map_->times[1] - map_->times[0] : 0.0;
}

PhiMatrix CoarseSpace::build_phi(int level) const {
    const std::vector<Vec2>& f = map_->at_level(level);
    PhiMatrix phi;
    phi.n_cols = coarse_.n_interior;
    phi.rows.resize(fine_->n_interior);
    for (int dof = 0; dof < fine_->n_interior; ++dof) {
        const Vec2 y = f[fine_->interior_nodes[dof]];
        const PointLocation loc = locator_->locate(y);  // OutOfDomain is fatal here
        const auto& tri = coarse_.triangles[loc.triangle];
        PhiMatrix::Row& row = phi.rows[dof];
        for (int v = 0; v < 3; ++v) {
            const int cdof = coarse_.node_to_interior[tri[v]];
            if (cdof < 0 || loc.bary[v] == 0.0) continue;  // coarse boundary dofs eliminated
            row.cols[row.ncols] = cdof;
            row.w[row.ncols] = loc.bary[v];
            ++row.ncols;
        }
    }
    return phi;
}

const PhiMatrix& CoarseSpace::phi(int level) const {
    const int key = map_->time_independent ? 0 : level;
    for (int s = 0; s < 2; ++s)
        if (cached_level_[s] == key) return cache_[s];
    const int s = cache_next_;
    cache_next_ = 1 - cache_next_;
    cache_[s] = build_phi(key);
    cached_level_[s] = key;
    return cache_[s];
}

CoarseTrajectory solve_coarse_semidiscrete(const CoarseSpace& space, const Medium& medium,
                                           const SourceFn& g, double T, int n_sub) {
    if (medium.time_dependent())
        throw ConfigError("solve_coarse_semidiscrete: medium must be time independent");
    const Mesh& fine = space.fine_mesh();
    const PhiMatrix& phi = space.phi(0);
    const SparseMatrix M = assemble_mass(fine);
    const SparseMatrix A = assemble_stiffness(fine, medium, 0.0);
    const DenseMatrix Mc = triple_product(phi, M, phi);
    const DenseMatrix Ac = triple_product(phi, A, phi);
    const double dt = T / n_sub;
    DenseMatrix lhs = Mc;
    DenseMatrix dtAc = Ac;
    dtAc.scale(dt);
    lhs += dtAc;

    CoarseTrajectory traj;
    traj.dt = dt;
    std::vector<double> c(space.n_dof(), 0.0);
    traj.times.push_back(0.0);
    traj.c.push_back(c);
    for (int k = 1; k <= n_sub; ++k) {
        const double t = k * dt;
        std::vector<double> rhs = Mc.matvec(c);
        const std::vector<double> bc = phi.multiply_transposed(assemble_load(fine, g, t));
        for (int i = 0; i < space.n_dof(); ++i) rhs[i] += dt * bc[i];
        c = lhs.solve(rhs);
        traj.times.push_back(t);
        traj.c.push_back(c);
    }
    return traj;
}

std::vector<double> implicit_coarse_step(const CoarseSpace& space, const Medium& medium,
                                         const SourceFn& g, std::span<const double> c_n,
                                         int level_n, int level_np1) {
    const Mesh& fine = space.fine_mesh();
    const double dt = space.fine_dt();
    const int ndof = space.n_dof();
    const bool phi_const = space.harmonic_map().time_independent;
    const bool a_const = !medium.time_dependent();

    const SparseMatrix M = assemble_mass(fine);
    std::vector<double> rhs;
    {
        const PhiMatrix& phi_n = space.phi(level_n);
        rhs = triple_product(phi_n, M, phi_n).matvec(c_n);
    }

    DenseMatrix stiff_sum(ndof, ndof);  // sum_k dt Phi_k^T A(t_k) Phi_k
    DenseMatrix mdot_sum(ndof, ndof);   // sum_k dt Phidot_k^T M Phi_k
    DenseMatrix ac_const;
    if (a_const) {
        const PhiMatrix& phi0 = space.phi(level_n);
        ac_const = triple_product(phi0, assemble_stiffness(fine, medium, 0.0), phi0);
    }
    for (int k = level_n + 1; k <= level_np1; ++k) {
        const double t = space.harmonic_map().times[k];
        const PhiMatrix& phi_k = space.phi(k);
        if (a_const) {
            DenseMatrix s = ac_const;
            stiff_sum += s.scale(dt);
        } else {
            DenseMatrix s = triple_product(phi_k, assemble_stiffness(fine, medium, t), phi_k);
            stiff_sum += s.scale(dt);
        }
        if (!phi_const) {
            // dt * Phidot^T M Phi with Phidot the backward difference over (t_{k-1}, t_k]
            const PhiMatrix& phi_km1 = space.phi(k - 1);
            mdot_sum += triple_product(phi_k, M, phi_k);
            mdot_sum -= triple_product(phi_km1, M, phi_k);
        }
        const std::vector<double> bc = phi_k.multiply_transposed(assemble_load(fine, g, t));
        for (int i = 0; i < ndof; ++i) rhs[i] += dt * bc[i];
    }
    const PhiMatrix& phi_end = space.phi(level_np1);
    DenseMatrix lhs = triple_product(phi_end, M, phi_end);
    lhs -= mdot_sum;
    lhs += stiff_sum;
    try {
        return lhs.solve(rhs);
    } catch (const SingularSystemError&) {
        char msg[128];
        std::snprintf(msg, sizeof(msg),
                      "implicit_coarse_step: singular system on interval levels (%d, %d]", level_n,
                      level_np1);
        throw SingularSystemError(msg);
    }
}

CoarseTrajectory run_coarse_solver(const CoarseSpace& space, const Medium& medium,
                                   const SourceFn& g, double T, int m_steps) {
    const int n_fine = space.n_fine_levels() - 1;
    if (m_steps < 1 || n_fine % m_steps != 0)
        throw ConfigError("run_coarse_solver: coarse step count must divide the fine step count");
    const int stride = n_fine / m_steps;
    CoarseTrajectory traj;
    traj.dt = T / m_steps;
    std::vector<double> c(space.n_dof(), 0.0);
    traj.times.push_back(0.0);
    traj.c.push_back(c);
    for (int n = 0; n < m_steps; ++n) {
        c = implicit_coarse_step(space, medium, g, c, n * stride, (n + 1) * stride);
        traj.times.push_back((n + 1) * traj.dt);
        traj.c.push_back(c);
    }
    return traj;
}

std::vector<double> reconstruct(const CoarseSpace& space, std::span<const double> c, int level) {
    return extend_interior(space.fine_mesh(), space.phi(level).multiply(c));
}

void export_coarse_trajectory_csv(const CoarseTrajectory& traj, std::ostream& out) {
    out << "coarse_step,dof_id,coefficient\n";
    char buf[96];
    for (std::size_t s = 0; s < traj.c.size(); ++s) {
        for (std::size_t i = 0; i < traj.c[s].size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.12g\n", s, i, traj.c[s][i]);
            out << buf;
        }
    }
}

}  // namespace parhom
