#include "parhom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

namespace parhom {

namespace {
constexpr double kBaryClamp = -1e-12;  // treat boundary-edge queries as inside
constexpr double kBarySlack = -1e-9;   // hull tolerance
}  // namespace

Mesh::Mesh() = default;
Mesh::~Mesh() = default;
Mesh::Mesh(Mesh&&) noexcept = default;
Mesh& Mesh::operator=(Mesh&&) noexcept = default;

const TriLocator& Mesh::locator() const {
    if (!locator_) locator_ = std::make_unique<TriLocator>(*this);
    return *locator_;
}

Mesh build_uniform_mesh(int n) {
    if (n < 1) throw ConfigError("build_uniform_mesh: subdivision count must be >= 1");
    Mesh m;
    m.n = n;
    const int nn = n + 1;
    const double h = 2.0 / n;
    m.nodes.resize(static_cast<std::size_t>(nn) * nn);
    m.boundary_mask.resize(m.nodes.size());
    for (int j = 0; j < nn; ++j) {
        for (int i = 0; i < nn; ++i) {
            const int id = j * nn + i;
            m.nodes[id] = {-1.0 + i * h, -1.0 + j * h};
            m.boundary_mask[id] = (i == 0 || i == n || j == 0 || j == n) ? 1 : 0;
        }
    }
    m.triangles.reserve(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int p00 = j * nn + i;
            const int p10 = j * nn + i + 1;
            const int p01 = (j + 1) * nn + i;
            const int p11 = (j + 1) * nn + i + 1;
            // diagonal p00 -> p11
            m.triangles.push_back({p00, p10, p11});
            m.triangles.push_back({p00, p11, p01});
        }
    }
    m.tri_area.resize(m.triangles.size());
    m.tri_grad.resize(m.triangles.size());
    for (std::size_t k = 0; k < m.triangles.size(); ++k) {
        const auto& t = m.triangles[k];
        const Vec2 a = m.nodes[t[0]], b = m.nodes[t[1]], c = m.nodes[t[2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        m.tri_area[k] = 0.5 * det;
        // grad of barycentric coordinate of vertex v: rotate opposite edge
        m.tri_grad[k][0] = {(b.y - c.y) / det, (c.x - b.x) / det};
        m.tri_grad[k][1] = {(c.y - a.y) / det, (a.x - c.x) / det};
        m.tri_grad[k][2] = {(a.y - b.y) / det, (b.x - a.x) / det};
    }
    m.node_to_interior.assign(m.nodes.size(), -1);
    for (std::size_t v = 0; v < m.nodes.size(); ++v) {
        if (!m.boundary_mask[v]) {
            m.node_to_interior[v] = static_cast<int>(m.interior_nodes.size());
            m.interior_nodes.push_back(static_cast<int>(v));
        }
    }
    m.n_interior = static_cast<int>(m.interior_nodes.size());
    return m;
}

TriLocator::TriLocator(const Mesh& mesh) : mesh_(&mesh), nodes_(mesh.nodes) { build_grid(); }

TriLocator::TriLocator(const Mesh& mesh, std::vector<Vec2> deformed_nodes)
    : mesh_(&mesh), nodes_(std::move(deformed_nodes)) {
    build_grid();
}

void TriLocator::build_grid() {
    xmin_ = ymin_ = 1e300;
    xmax_ = ymax_ = -1e300;
    for (const auto& p : nodes_) {
        xmin_ = std::min(xmin_, p.x);
        xmax_ = std::max(xmax_, p.x);
        ymin_ = std::min(ymin_, p.y);
        ymax_ = std::max(ymax_, p.y);
    }
    const int ntri = static_cast<int>(mesh_->triangles.size());
    grid_n_ = std::max(1, static_cast<int>(std::sqrt(ntri / 2.0)));
    cells_.assign(static_cast<std::size_t>(grid_n_) * grid_n_, {});
    const double dx = (xmax_ - xmin_) / grid_n_;
    const double dy = (ymax_ - ymin_) / grid_n_;
    for (int k = 0; k < ntri; ++k) {
        const auto& t = mesh_->triangles[k];
        double bx0 = 1e300, bx1 = -1e300, by0 = 1e300, by1 = -1e300;
        for (int v : t) {
            bx0 = std::min(bx0, nodes_[v].x);
            bx1 = std::max(bx1, nodes_[v].x);
            by0 = std::min(by0, nodes_[v].y);
            by1 = std::max(by1, nodes_[v].y);
        }
        auto clampi = [&](int i) { return std::min(std::max(i, 0), grid_n_ - 1); };
        const int i0 = clampi(static_cast<int>((bx0 - xmin_) / dx));
        const int i1 = clampi(static_cast<int>((bx1 - xmin_) / dx));
        const int j0 = clampi(static_cast<int>((by0 - ymin_) / dy));
        const int j1 = clampi(static_cast<int>((by1 - ymin_) / dy));
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) cells_[j * grid_n_ + i].push_back(k);
    }
}

bool TriLocator::barycentric(int tri, Vec2 p, std::array<double, 3>& w) const {
    const auto& t = mesh_->triangles[tri];
    const Vec2 a = nodes_[t[0]], b = nodes_[t[1]], c = nodes_[t[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    if (det == 0.0) return false;
    w[0] = ((b.x - p.x) * (c.y - p.y) - (c.x - p.x) * (b.y - p.y)) / det;
    w[1] = ((c.x - p.x) * (a.y - p.y) - (a.x - p.x) * (c.y - p.y)) / det;
    w[2] = 1.0 - w[0] - w[1];
    return true;
}

PointLocation TriLocator::locate(Vec2 p) const {
    auto clampi = [&](int i) { return std::min(std::max(i, 0), grid_n_ - 1); };
    const double dx = (xmax_ - xmin_) / grid_n_;
    const double dy = (ymax_ - ymin_) / grid_n_;
    const int ci = clampi(dx > 0 ? static_cast<int>((p.x - xmin_) / dx) : 0);
    const int cj = clampi(dy > 0 ? static_cast<int>((p.y - ymin_) / dy) : 0);

    auto finish = [&](int tri, std::array<double, 3> w) {
        double sum = 0.0;
        for (double& wi : w) {
            if (wi < 0.0) wi = 0.0;
            sum += wi;
        }
        for (double& wi : w) wi /= sum;
        return PointLocation{tri, w};
    };

    int best_tri = -1;
    std::array<double, 3> best_w{};
    double best_min = -1e300;
    auto scan = [&](const std::vector<int>& tris) -> int {
        std::array<double, 3> w;
        for (int k : tris) {
            if (!barycentric(k, p, w)) continue;
            const double mn = std::min({w[0], w[1], w[2]});
            if (mn >= kBaryClamp) return (best_tri = k, best_w = w, k);
            if (mn > best_min) {
                best_min = mn;
                best_tri = k;
                best_w = w;
            }
        }
        return -1;
    };

    if (scan(cells_[cj * grid_n_ + ci]) >= 0) return finish(best_tri, best_w);
    // fall back to a full scan (lowest containing index still wins)
    best_tri = -1;
    best_min = -1e300;
    std::vector<int> all(mesh_->triangles.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
    if (scan(all) >= 0) return finish(best_tri, best_w);
    if (best_tri >= 0 && best_min >= kBarySlack) return finish(best_tri, best_w);
    char msg[128];
    std::snprintf(msg, sizeof(msg), "locate: point (%.17g, %.17g) outside the triangulation", p.x,
                  p.y);
    throw OutOfDomainError(msg);
}

PointLocation locate_point(const Mesh& mesh, Vec2 p) { return mesh.locator().locate(p); }

double p1_interpolate(const Mesh& mesh, std::span<const double> nodal, const PointLocation& loc) {
    const auto& t = mesh.triangles[loc.triangle];
    return loc.bary[0] * nodal[t[0]] + loc.bary[1] * nodal[t[1]] + loc.bary[2] * nodal[t[2]];
}

void export_mesh_csv(const Mesh& mesh, std::ostream& out) {
    out << "nodes\nid,x,y,boundary\n";
    char buf[128];
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v) {
        std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%d\n", v, mesh.nodes[v].x, mesh.nodes[v].y,
                      static_cast<int>(mesh.boundary_mask[v]));
        out << buf;
    }
    out << "triangles\nid,n0,n1,n2\n";
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%d\n", k, t[0], t[1], t[2]);
        out << buf;
    }
}

}  // namespace parhom
