#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "parhom/errors.hpp"
#include "parhom/mesh.hpp"
#include "parhom/metrics.hpp"
#include "parhom/rng.hpp"

using namespace parhom;

namespace {

std::vector<double> nodal(const Mesh& mesh, double (*f)(Vec2)) {
    std::vector<double> u(mesh.nodes.size());
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v) u[v] = f(mesh.nodes[v]);
    return u;
}

}  // namespace

TEST_CASE("absolute norms of simple fields") {
    const Mesh mesh = build_uniform_mesh(16);
    const std::vector<double> c(mesh.nodes.size(), -2.5);
    const ErrorNorms n = absolute_norms(mesh, c);
    CHECK(n.l1 == doctest::Approx(2.5 * 4.0).epsilon(1e-12));
    CHECK(n.l2 == doctest::Approx(2.5 * 2.0).epsilon(1e-12));
    CHECK(n.linf == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(n.h1 == doctest::Approx(0.0).epsilon(1e-12));

    // u = x is reproduced exactly by P1: |grad| = 1, L2 = sqrt(4/3)
    const std::vector<double> lin = nodal(mesh, +[](Vec2 p) { return p.x; });
    const ErrorNorms m = absolute_norms(mesh, lin);
    CHECK(m.h1 == doctest::Approx(2.0).epsilon(1e-12));  // sqrt(area)
    CHECK(m.l2 == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("identical fields give zero errors, scaled fields give the scale") {
    const Mesh mesh = build_uniform_mesh(12);
    const std::vector<double> u = nodal(mesh, +[](Vec2 p) { return std::sin(p.x) * p.y + 2.0; });
    const ErrorNorms zero = relative_errors_fine(mesh, u, u);
    CHECK(zero.l1 == 0.0);
    CHECK(zero.l2 == 0.0);
    CHECK(zero.linf == 0.0);
    CHECK(zero.h1 == 0.0);

    std::vector<double> v = u;
    for (double& x : v) x *= 0.9;
    const ErrorNorms e = relative_errors_fine(mesh, u, v);
    CHECK(e.l1 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(e.l2 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(e.linf == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(e.h1 == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("coarse errors ignore oscillation that vanishes at coarse nodes") {
    const Mesh fine = build_uniform_mesh(16);
    const Mesh coarse = build_uniform_mesh(4);
    const std::vector<double> ref = nodal(fine, +[](Vec2 p) { return p.x * p.x + p.y + 3.0; });
    std::vector<double> rec = ref;
    // perturb only fine nodes that do not sit on the coarse grid (stride 4)
    const int stride = 16 / 4;
    for (int j = 0; j <= 16; ++j)
        for (int i = 0; i <= 16; ++i)
            if (i % stride != 0 || j % stride != 0) rec[j * 17 + i] += 0.05;
    const ErrorNorms cerr = relative_errors_coarse(coarse, fine, ref, rec);
    CHECK(cerr.l2 <= 1e-14);
    CHECK(cerr.linf <= 1e-14);
    const ErrorNorms ferr = relative_errors_fine(fine, ref, rec);
    CHECK(ferr.linf > 0.009);  // 0.05 / max|ref| = 0.01 up to rounding
}

TEST_CASE("degenerate reference is rejected") {
    const Mesh mesh = build_uniform_mesh(8);
    const std::vector<double> zero(mesh.nodes.size(), 0.0);
    const std::vector<double> one(mesh.nodes.size(), 1.0);
    CHECK_THROWS_AS(relative_errors_fine(mesh, zero, one), DegenerateReferenceError);
}

TEST_CASE("log-log slopes on synthetic h^2 data are exactly 2") {
    std::vector<std::pair<int, ErrorNorms>> rows;
    for (const int nc : {4, 8, 16, 32}) {
        const double h = 2.0 / nc;
        ErrorNorms e;
        e.l1 = 0.3 * h * h;
        e.l2 = 0.7 * h * h;
        e.linf = 1.1 * h * h;
        e.h1 = 0.9 * h;  // first order in the gradient
        rows.push_back({nc, e});
    }
    const ConvergenceTable t = convergence_table(rows);
    CHECK(t.slopes.l2 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(t.slopes.l1 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(t.slopes.linf == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(t.slopes.h1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t.dofs.size() == 4);
    CHECK(t.dofs[0] == 9);
    CHECK(t.h[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("error table CSV shape") {
    std::vector<std::pair<int, ErrorNorms>> rows;
    for (const int nc : {4, 8}) rows.push_back({nc, ErrorNorms{0.1, 0.1, 0.1, 0.1}});
    std::ostringstream out;
    write_error_table_csv(convergence_table(rows), out);
    int lines = 0;
    for (const char c : out.str()) lines += c == '\n';
    CHECK(lines >= 3);  // header + two rows (+ optional slope row)
    CHECK(out.str().find("dof") != std::string::npos);
}
