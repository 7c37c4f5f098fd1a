#include "parhom/diagnostics.hpp"

#include <cmath>
#include <cstdio>

namespace parhom {

double SymTensor2::lambda_min() const {
    const double d = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
    return 0.5 * (a11 + a22 - d);
}

double SymTensor2::lambda_max() const {
    const double d = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
    return 0.5 * (a11 + a22 + d);
}

std::vector<SymTensor2> compute_sigma_level(const Mesh& mesh, const Medium& medium,
                                            const HarmonicMap& map, int level) {
    const double t = map.times[std::min<std::size_t>(level, map.times.size() - 1)];
    const auto jac = map.jacobians(level);
    std::vector<SymTensor2> out(mesh.triangles.size());
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const TensorSample a = medium.sample(mesh.centroid(static_cast<int>(k)), t);
        const auto& j = jac[k];
        // sigma = J^T a J with J_kl = dF_k/dx_l
        const double b11 = a.a11 * j.j11 + a.a12 * j.j21;  // (a J)_11
        const double b12 = a.a11 * j.j12 + a.a12 * j.j22;
        const double b21 = a.a12 * j.j11 + a.a22 * j.j21;
        const double b22 = a.a12 * j.j12 + a.a22 * j.j22;
        out[k].a11 = j.j11 * b11 + j.j21 * b21;
        out[k].a12 = j.j11 * b12 + j.j21 * b22;
        out[k].a22 = j.j12 * b12 + j.j22 * b22;
    }
    return out;
}

SigmaField compute_sigma(const Mesh& mesh, const Medium& medium, const HarmonicMap& map,
                         const std::vector<int>& levels) {
    SigmaField sf;
    sf.levels = levels;
    for (int lv : levels) sf.per_level.push_back(compute_sigma_level(mesh, medium, map, lv));
    return sf;
}

double cordes_beta(const SigmaField& sigma) {
    double beta = 0.0;
    for (const auto& level : sigma.per_level) {
        for (const auto& s : level) {
            const double tr = s.trace();
            beta = std::max(beta, 2.0 - tr * tr / s.trace_sq());
        }
    }
    return beta;
}

AnisotropyStats anisotropy_stats(const SigmaField& sigma) {
    AnisotropyStats st;
    double max_tr = -1e300, max_inv_tr = -1e300;
    st.mu = 0.0;
    st.z = 0.0;
    for (const auto& level : sigma.per_level) {
        for (const auto& s : level) {
            const double tr = s.trace();
            st.mu = std::max(st.mu, s.lambda_max() / s.lambda_min());
            st.z = std::max(st.z, 2.0 * s.trace_sq() / (tr * tr));
            max_tr = std::max(max_tr, tr);
            max_inv_tr = std::max(max_inv_tr, 1.0 / tr);
        }
    }
    st.y = max_tr * max_inv_tr;
    return st;
}

CordesReport check_condition_1_1(const SigmaField& sigma) {
    CordesReport r;
    const AnisotropyStats st = anisotropy_stats(sigma);
    r.mu = st.mu;
    r.z = st.z;
    r.y = st.y;
    constexpr double n = 2.0;
    double max_inv_tr = -1e300;
    for (const auto& level : sigma.per_level)
        for (const auto& s : level) max_inv_tr = std::max(max_inv_tr, 1.0 / s.trace());
    r.delta = n * max_inv_tr;
    r.epsilon = (2.0 * n * r.y - n) / (2.0 * n * r.y * r.y);
    r.lhs = -1e300;
    for (std::size_t lv = 0; lv < sigma.per_level.size(); ++lv) {
        const auto& level = sigma.per_level[lv];
        for (std::size_t k = 0; k < level.size(); ++k) {
            const double tr = level[k].trace();
            const double v =
                (r.delta * r.delta * level[k].trace_sq() + 1.0) /
                ((r.delta * tr + 1.0) * (r.delta * tr + 1.0));
            if (v > r.lhs) {
                r.lhs = v;
                r.worst_triangle = static_cast<int>(k);
                r.worst_level = sigma.levels[lv];
            }
        }
    }
    r.condition_1_1 = r.lhs <= 1.0 / (n + r.epsilon);
    r.proviso = r.z <= 1.0 + r.epsilon / n;
    return r;
}

CordesReport cordes_report(const SigmaField& sigma) {
    CordesReport r = check_condition_1_1(sigma);
    r.beta = cordes_beta(sigma);
    return r;
}

void write_cordes_json(const CordesReport& r, std::ostream& out) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "{\n"
                  "  \"beta\": %.12g,\n"
                  "  \"mu\": %.12g,\n"
                  "  \"z\": %.12g,\n"
                  "  \"y\": %.12g,\n"
                  "  \"delta\": %.12g,\n"
                  "  \"epsilon\": %.12g,\n"
                  "  \"lhs\": %.12g,\n"
                  "  \"condition_1_1\": %s,\n"
                  "  \"proviso\": %s,\n"
                  "  \"worst_triangle\": %d,\n"
                  "  \"worst_level\": %d\n"
                  "}\n",
                  r.beta, r.mu, r.z, r.y, r.delta, r.epsilon, r.lhs,
                  r.condition_1_1 ? "true" : "false", r.proviso ? "true" : "false",
                  r.worst_triangle, r.worst_level);
    out << buf;
}

void write_beta_csv(const Mesh& mesh, const SigmaField& sigma, std::ostream& out) {
    out << "triangle_id,cx,cy,beta\n";
    char buf[128];
    const auto& level = sigma.per_level.front();
    for (std::size_t k = 0; k < level.size(); ++k) {
        const double tr = level[k].trace();
        const double beta = 2.0 - tr * tr / level[k].trace_sq();
        const Vec2 c = mesh.centroid(static_cast<int>(k));
        std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%.12g\n", k, c.x, c.y, beta);
        out << buf;
    }
}

namespace {

double h2_energy(const std::vector<double>& grid, int m) {
    const double hg = 2.0 / (m - 1);
    const double cell_area = hg * hg;
    double e = 0.0;
    auto at = [&](int i, int j) { return grid[std::size_t(j) * m + i]; };
    for (int j = 1; j < m - 1; ++j) {
        for (int i = 1; i < m - 1; ++i) {
            // only points more than 2 cells away from the boundary
            if (std::min(std::min(i, m - 1 - i), std::min(j, m - 1 - j)) <= 2) continue;
            const double dxx = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (hg * hg);
            const double dyy = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (hg * hg);
            const double dxy = (at(i + 1, j + 1) - at(i - 1, j + 1) - at(i + 1, j - 1) +
                                at(i - 1, j - 1)) /
                               (4.0 * hg * hg);
            e += (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy) * cell_area;
        }
    }
    return e;
}

}  // namespace

double compensation_ratio(const Mesh& mesh, std::span<const double> u_full,
                          const std::vector<Vec2>& f_level, int m) {
    std::vector<Vec2> grid_pts;
    grid_pts.reserve(std::size_t(m) * m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            grid_pts.push_back({-1.0 + 2.0 * i / (m - 1), -1.0 + 2.0 * j / (m - 1)});

    std::vector<double> u_grid(grid_pts.size()), uc_grid(grid_pts.size());
    for (std::size_t q = 0; q < grid_pts.size(); ++q)
        u_grid[q] = p1_interpolate(mesh, u_full, locate_point(mesh, grid_pts[q]));
    const std::vector<PointLocation> locs = invert_map(mesh, f_level, grid_pts);
    for (std::size_t q = 0; q < grid_pts.size(); ++q)
        uc_grid[q] = p1_interpolate(mesh, u_full, locs[q]);

    return h2_energy(uc_grid, m) / h2_energy(u_grid, m);
}

}  // namespace parhom
