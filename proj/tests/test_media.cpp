#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "parhom/media.hpp"
#include "parhom/mesh.hpp"
#include "parhom/rng.hpp"

using namespace parhom;

namespace {

// independent evaluation of the multiscale trigonometric field
double trig_oracle(double x, double y, double t) {
    const double eps[5] = {1.0 / 5.0, 1.0 / 13.0, 1.0 / 17.0, 1.0 / 31.0, 1.0 / 65.0};
    const double xp = x + std::sqrt(2.0) * t;
    const double yp = y - std::sqrt(2.0) * t;
    double s = 0.0;
    for (int i = 0; i < 5; ++i)
        s += (1.1 + std::sin(2.0 * M_PI * xp / eps[i])) / (1.1 + std::sin(2.0 * M_PI * yp / eps[i]));
    s += std::sin(4.0 * xp * xp * yp * yp) + 1.0;
    return s / 6.0;
}

std::vector<Medium> all_media(const Mesh& mesh) {
    std::vector<Medium> v;
    v.push_back(Medium::identity());
    v.push_back(Medium::site_percolation(mesh, 11));
    v.push_back(Medium::trig_multiscale());
    v.push_back(Medium::random_fourier(12));
    v.push_back(Medium::random_fractal(13));
    v.push_back(Medium::channel(mesh, 14));
    return v;
}

}  // namespace

TEST_CASE("every family is SPD and symmetric over random space-time samples") {
    const Mesh mesh = build_uniform_mesh(32);
    const CounterRng rng(2024);
    for (const Medium& medium : all_media(mesh)) {
        double lmin = 1e300;
        for (int q = 0; q < 100000; ++q) {
            const Vec2 x{rng.uniform(-1.0, 1.0, q, 0), rng.uniform(-1.0, 1.0, q, 1)};
            const double t = rng.uniform(0.0, 1.0, q, 2);
            const TensorSample a = medium.sample(x, t);
            lmin = std::min(lmin, a.lambda_min());
            if (!a.spd()) {  // report once, cheaply
                CHECK(a.spd());
                break;
            }
        }
        CHECK(lmin > 0.0);
    }
}

TEST_CASE("same seed reproduces bit-identical samples, different seed does not") {
    const Mesh mesh = build_uniform_mesh(16);
    const Medium a = Medium::site_percolation(mesh, 5);
    const Medium b = Medium::site_percolation(mesh, 5);
    const Medium c = Medium::site_percolation(mesh, 6);
    const CounterRng rng(3);
    int diff = 0;
    for (int q = 0; q < 2000; ++q) {
        const Vec2 x{rng.uniform(-1.0, 1.0, q, 0), rng.uniform(-1.0, 1.0, q, 1)};
        CHECK(a.sample(x, 0.0).a11 == b.sample(x, 0.0).a11);
        diff += a.sample(x, 0.0).a11 != c.sample(x, 0.0).a11;
    }
    CHECK(diff > 500);

    const Medium f1 = Medium::random_fourier(77);
    const Medium f2 = Medium::random_fourier(77);
    CHECK(f1.sample({0.3, -0.4}, 0.2).a11 == f2.sample({0.3, -0.4}, 0.2).a11);
}

TEST_CASE("time-independent families ignore t exactly") {
    const Mesh mesh = build_uniform_mesh(16);
    for (const Medium& medium : all_media(mesh)) {
        if (medium.time_dependent()) continue;
        const CounterRng rng(9);
        for (int q = 0; q < 200; ++q) {
            const Vec2 x{rng.uniform(-1.0, 1.0, q, 0), rng.uniform(-1.0, 1.0, q, 1)};
            CHECK(medium.sample(x, 0.0).a11 == medium.sample(x, 0.87).a11);
        }
    }
}

TEST_CASE("time-dependent families actually move") {
    CHECK(Medium::trig_multiscale().time_dependent());
    CHECK(Medium::random_fourier(1).time_dependent());
    CHECK(Medium::random_fractal(1).time_dependent());
    const Medium m = Medium::trig_multiscale();
    CHECK(m.sample({0.1, 0.2}, 0.0).a11 != m.sample({0.1, 0.2}, 0.3).a11);
}

TEST_CASE("trigonometric field matches the closed form to 1e-12") {
    const Medium m = Medium::trig_multiscale();
    const CounterRng rng(31);
    for (int q = 0; q < 1000; ++q) {
        const double x = rng.uniform(-1.0, 1.0, q, 0);
        const double y = rng.uniform(-1.0, 1.0, q, 1);
        const double t = rng.uniform(0.0, 0.3, q, 2);
        CHECK(m.sample({x, y}, t).a11 == doctest::Approx(trig_oracle(x, y, t)).epsilon(1e-12));
    }
}

TEST_CASE("percolation takes values in {1, 100}, roughly balanced, constant per triangle") {
    const Mesh mesh = build_uniform_mesh(64);
    const Medium m = Medium::site_percolation(mesh, 123);
    int ones = 0, hundreds = 0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const double v = m.sample(mesh.centroid(static_cast<int>(k)), 0.0).a11;
        CHECK((v == 1.0 || v == 100.0));
        (v == 1.0 ? ones : hundreds)++;
        // the whole triangle shares the centroid value
        const auto& tri = mesh.triangles[k];
        const Vec2 p = 0.5 * (mesh.centroid(static_cast<int>(k)) + mesh.nodes[tri[0]]);
        CHECK(m.sample(p, 0.0).a11 == v);
    }
    const int total = ones + hundreds;
    CHECK(ones > total / 3);
    CHECK(hundreds > total / 3);
}

TEST_CASE("channel is 100 inside and U[0.5, 1.5] outside") {
    const Mesh mesh = build_uniform_mesh(128);
    const Medium m = Medium::channel(mesh, 4);
    // points on the polyline spine
    CHECK(m.sample({0.0, -0.5}, 0.0).a11 == 100.0);
    CHECK(m.sample({0.0, 0.0}, 0.0).a11 == 100.0);
    CHECK(m.sample({0.9, 0.5}, 0.0).a11 == 100.0);
    CHECK(m.sample({-0.5, 0.25}, 0.0).a11 == 100.0);
    // far from the channel
    for (const Vec2 p : {Vec2{0.8, -0.9}, Vec2{-0.8, 0.9}, Vec2{0.7, 0.2}}) {
        const double v = m.sample(p, 0.0).a11;
        CHECK(v >= 0.5);
        CHECK(v <= 1.5);
    }
}

TEST_CASE("fractal values stay inside the 6-layer product bounds") {
    const Medium m = Medium::random_fractal(8);
    const double lo = std::pow(0.7, 6), hi = std::pow(1.0 / 0.7, 6);
    const CounterRng rng(17);
    double vmin = 1e300, vmax = 0.0;
    for (int q = 0; q < 20000; ++q) {
        const Vec2 x{rng.uniform(-1.0, 1.0, q, 0), rng.uniform(-1.0, 1.0, q, 1)};
        const double v = m.sample(x, rng.uniform(0.0, 1.0, q, 2)).a11;
        CHECK(v >= lo);
        CHECK(v <= hi);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    CHECK(vmax / vmin > 5.0);  // genuinely multiscale
}

TEST_CASE("fourier field is exp of a bounded sum and moves with the wave frame") {
    const Medium m = Medium::random_fourier(21);
    // |h| <= 160 * 0.2 worst case; in practice much smaller but positive
    const double v = m.sample({0.2, 0.1}, 0.0).a11;
    CHECK(v > 0.0);
    // the field is a function of (x + sqrt(2) t, y - sqrt(2) t): shifting x by
    // -sqrt(2) dt and t by dt leaves x' fixed but changes y'
    const double s = std::sqrt(2.0) * 0.05;
    const double w1 = m.sample({0.2 - s, 0.1 + s}, 0.05).a11;
    CHECK(w1 == doctest::Approx(m.sample({0.2, 0.1}, 0.0).a11).epsilon(1e-10));
}

TEST_CASE("out-of-domain samples throw") {
    const Medium m = Medium::trig_multiscale();
    CHECK_THROWS_AS(m.sample({1.5, 0.0}, 0.0), OutOfDomainError);
    CHECK_THROWS_AS(m.sample({0.0, 0.0}, -0.5), OutOfDomainError);
}

TEST_CASE("field CSV export shape") {
    std::ostringstream out;
    export_field_csv(Medium::identity(), 3, 0.0, out);
    int lines = 0;
    for (const char c : out.str()) lines += c == '\n';
    CHECK(lines == 1 + 9);
}
