#include "parhom/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "parhom/errors.hpp"

namespace parhom {

ErrorNorms absolute_norms(const Mesh& mesh, std::span<const double> v) {
    ErrorNorms n;
    double l2sq = 0.0, h1sq = 0.0, l1 = 0.0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& tri = mesh.triangles[k];
        const double area = mesh.tri_area[k];
        // vertex rule for |v|, consistent mass for v^2
        double labs = 0.0;
        for (int a = 0; a < 3; ++a) {
            labs += std::abs(v[tri[a]]);
            for (int b = 0; b < 3; ++b)
                l2sq += (a == b ? 2.0 : 1.0) * area / 12.0 * v[tri[a]] * v[tri[b]];
        }
        l1 += area / 3.0 * labs;
        Vec2 grad{0.0, 0.0};
        for (int a = 0; a < 3; ++a) grad = grad + v[tri[a]] * mesh.tri_grad[k][a];
        h1sq += area * (grad.x * grad.x + grad.y * grad.y);
    }
    n.l1 = l1;
    n.l2 = std::sqrt(std::max(l2sq, 0.0));
    n.h1 = std::sqrt(std::max(h1sq, 0.0));
    for (const double x : v) n.linf = std::max(n.linf, std::abs(x));
    return n;
}

namespace {

ErrorNorms relative(const Mesh& mesh, std::span<const double> ref, std::span<const double> rec) {
    std::vector<double> diff(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) diff[i] = ref[i] - rec[i];
    const ErrorNorms d = absolute_norms(mesh, diff);
    const ErrorNorms r = absolute_norms(mesh, ref);
    if (r.l1 == 0.0 || r.l2 == 0.0 || r.linf == 0.0 || r.h1 == 0.0)
        throw DegenerateReferenceError("relative errors: reference norm is zero");
    return {d.l1 / r.l1, d.l2 / r.l2, d.linf / r.linf, d.h1 / r.h1};
}

}  // namespace

ErrorNorms relative_errors_fine(const Mesh& mesh, std::span<const double> u_ref,
                                std::span<const double> u_rec) {
    return relative(mesh, u_ref, u_rec);
}

ErrorNorms relative_errors_coarse(const Mesh& coarse, const Mesh& fine,
                                  std::span<const double> u_ref, std::span<const double> u_rec) {
    std::vector<double> ref_c(coarse.nodes.size()), rec_c(coarse.nodes.size());
    for (std::size_t v = 0; v < coarse.nodes.size(); ++v) {
        const PointLocation loc = locate_point(fine, coarse.nodes[v]);
        ref_c[v] = p1_interpolate(fine, u_ref, loc);
        rec_c[v] = p1_interpolate(fine, u_rec, loc);
    }
    return relative(coarse, ref_c, rec_c);
}

ConvergenceTable convergence_table(const std::vector<std::pair<int, ErrorNorms>>& by_coarse_n) {
    ConvergenceTable t;
    for (const auto& [nc, err] : by_coarse_n) {
        t.dofs.push_back((nc - 1) * (nc - 1));
        t.h.push_back(2.0 / nc);
        t.errors.push_back(err);
    }
    auto slope = [&](auto get) {
        // least squares fit of log(err) = s log(h) + c
        const std::size_t m = t.h.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const double x = std::log(t.h[i]);
            const double y = std::log(get(t.errors[i]));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    if (t.h.size() >= 2) {
        t.slopes.l1 = slope([](const ErrorNorms& e) { return e.l1; });
        t.slopes.l2 = slope([](const ErrorNorms& e) { return e.l2; });
        t.slopes.linf = slope([](const ErrorNorms& e) { return e.linf; });
        t.slopes.h1 = slope([](const ErrorNorms& e) { return e.h1; });
    }
    return t;
}

void write_error_table_csv(const ConvergenceTable& table, std::ostream& out) {
    out << "dof,L1,Linf,L2,H1\n";
    char buf[160];
    for (std::size_t i = 0; i < table.dofs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g\n", table.dofs[i],
                      table.errors[i].l1, table.errors[i].linf, table.errors[i].l2,
                      table.errors[i].h1);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "slope,%.12g,%.12g,%.12g,%.12g\n", table.slopes.l1,
                  table.slopes.linf, table.slopes.l2, table.slopes.h1);
    out << buf;
}

}  // namespace parhom
