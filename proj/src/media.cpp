#include "parhom/media.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

namespace parhom {

double TensorSample::lambda_min() const {
    const double tr = a11 + a22;
    const double d = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
    return 0.5 * (tr - d);
}

double TensorSample::lambda_max() const {
    const double tr = a11 + a22;
    const double d = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
    return 0.5 * (tr + d);
}

const char* family_name(MediumFamily f) {
    switch (f) {
        case MediumFamily::identity: return "identity";
        case MediumFamily::percolation: return "percolation";
        case MediumFamily::trig_multiscale: return "trig_multiscale";
        case MediumFamily::fourier_modes: return "fourier_modes";
        case MediumFamily::fractal: return "fractal";
        case MediumFamily::channel: return "channel";
        case MediumFamily::custom: return "custom";
    }
    return "?";
}

Medium Medium::identity() { return Medium(MediumFamily::identity, 0, false); }

Medium Medium::site_percolation(const Mesh& mesh, std::uint64_t seed) {
    Medium m(MediumFamily::percolation, seed, false);
    m.gen_n_ = mesh.n;
    return m;
}

Medium Medium::trig_multiscale() { return Medium(MediumFamily::trig_multiscale, 0, true); }

Medium Medium::random_fourier(std::uint64_t seed, double amplitude) {
    Medium m(MediumFamily::fourier_modes, seed, true);
    m.fourier_coef_.assign(2 * 81, 0.0);
    for (int k1 = -4; k1 <= 4; ++k1) {
        for (int k2 = -4; k2 <= 4; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const int idx = (k1 + 4) * 9 + (k2 + 4);
            m.fourier_coef_[2 * idx] = m.rng_.uniform(-amplitude, amplitude, idx, 0);
            m.fourier_coef_[2 * idx + 1] = m.rng_.uniform(-amplitude, amplitude, idx, 1);
        }
    }
    return m;
}

Medium Medium::random_fractal(std::uint64_t seed, double gamma) {
    Medium m(MediumFamily::fractal, seed, true);
    m.gamma_ = gamma;
    return m;
}

Medium Medium::channel(const Mesh& mesh, std::uint64_t seed) {
    Medium m(MediumFamily::channel, seed, false);
    m.gen_n_ = mesh.n;
    return m;
}

Medium Medium::custom(CustomFn fn, bool time_dependent) {
    Medium m(MediumFamily::custom, 0, time_dependent);
    m.custom_ = std::move(fn);
    return m;
}

int Medium::triangle_of(Vec2 x) const {
    const int n = gen_n_;
    const double h = 2.0 / n;
    auto clampi = [n](int i) { return std::min(std::max(i, 0), n - 1); };
    const int i = clampi(static_cast<int>((x.x + 1.0) / h));
    const int j = clampi(static_cast<int>((x.y + 1.0) / h));
    const double u = (x.x + 1.0) / h - i;
    const double v = (x.y + 1.0) / h - j;
    return 2 * (j * n + i) + (v > u ? 1 : 0);
}

double Medium::percolation_value(int tri) const {
    return rng_.uniform01(static_cast<std::uint64_t>(tri)) < 0.5 ? 1.0 : 100.0;
}

bool Medium::in_channel(Vec2 p) {
    // fixed S-shaped polyline, width of 2 fine cells at n = 128
    constexpr double hw = 1.0 / 64.0;  // half width
    struct Seg {
        double x0, x1, y0, y1;
    };
    static constexpr Seg segs[] = {
        {-1.0, 0.5, -0.5, -0.5},  // right along y = -1/2
        {0.5, 0.5, -0.5, 0.0},    // up
        {-0.5, 0.5, 0.0, 0.0},    // left along y = 0
        {-0.5, -0.5, 0.0, 0.5},   // up
        {-0.5, 1.0, 0.5, 0.5},    // right along y = 1/2, exits the domain
    };
    for (const auto& s : segs) {
        if (p.x >= s.x0 - hw && p.x <= s.x1 + hw && p.y >= s.y0 - hw && p.y <= s.y1 + hw)
            return true;
    }
    return false;
}

double Medium::channel_value(int tri) const {
    // centroid test is done by the caller through triangle_of; here the
    // triangle id keys the off-channel random draw
    return rng_.uniform(0.5, 1.5, static_cast<std::uint64_t>(tri), 7);
}

namespace {

double trig_value(Vec2 x, double t) {
    static constexpr double eps[5] = {1.0 / 5.0, 1.0 / 13.0, 1.0 / 17.0, 1.0 / 31.0, 1.0 / 65.0};
    const double xp = x.x + std::sqrt(2.0) * t;
    const double yp = x.y - std::sqrt(2.0) * t;
    double s = 0.0;
    for (double e : eps)
        s += (1.1 + std::sin(2.0 * M_PI * xp / e)) / (1.1 + std::sin(2.0 * M_PI * yp / e));
    s += std::sin(4.0 * xp * xp * yp * yp) + 1.0;
    return s / 6.0;
}

}  // namespace

TensorSample Medium::sample(Vec2 x, double t) const {
    if (x.x < -1.0 - 1e-9 || x.x > 1.0 + 1e-9 || x.y < -1.0 - 1e-9 || x.y > 1.0 + 1e-9 ||
        t < -1e-12) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "sample: (%.6g, %.6g, %.6g) outside domain", x.x, x.y, t);
        throw OutOfDomainError(msg);
    }
    switch (family_) {
        case MediumFamily::identity:
            return TensorSample::isotropic(1.0);
        case MediumFamily::percolation:
            return TensorSample::isotropic(percolation_value(triangle_of(x)));
        case MediumFamily::channel: {
            const int tri = triangle_of(x);
            // channel membership is decided at the generating triangle's centroid
            // so the field is constant per fine triangle
            const double h = 2.0 / gen_n_;
            const int cell = tri / 2, lower = 1 - tri % 2;
            const int ci = cell % gen_n_, cj = cell / gen_n_;
            const Vec2 c = lower ? Vec2{-1.0 + (ci + 2.0 / 3.0) * h, -1.0 + (cj + 1.0 / 3.0) * h}
                                 : Vec2{-1.0 + (ci + 1.0 / 3.0) * h, -1.0 + (cj + 2.0 / 3.0) * h};
            return TensorSample::isotropic(in_channel(c) ? 100.0 : channel_value(tri));
        }
        case MediumFamily::trig_multiscale:
            return TensorSample::isotropic(trig_value(x, t));
        case MediumFamily::fourier_modes: {
            const double xp = x.x + std::sqrt(2.0) * t;
            const double yp = x.y - std::sqrt(2.0) * t;
            // powers of e^{2 pi i xp}, e^{2 pi i yp}; negative modes by conjugation
            std::complex<double> p1[9], p2[9];
            const std::complex<double> e1(std::cos(2.0 * M_PI * xp), std::sin(2.0 * M_PI * xp));
            const std::complex<double> e2(std::cos(2.0 * M_PI * yp), std::sin(2.0 * M_PI * yp));
            p1[4] = p2[4] = 1.0;
            for (int k = 1; k <= 4; ++k) {
                p1[4 + k] = p1[3 + k] * e1;
                p1[4 - k] = std::conj(p1[4 + k]);
                p2[4 + k] = p2[3 + k] * e2;
                p2[4 - k] = std::conj(p2[4 + k]);
            }
            double h = 0.0;
            for (int i = 0; i < 9; ++i) {
                for (int j = 0; j < 9; ++j) {
                    const int idx = i * 9 + j;
                    const std::complex<double> z = p1[i] * p2[j];  // e^{2 pi i k.x'}
                    h += fourier_coef_[2 * idx] * z.imag() + fourier_coef_[2 * idx + 1] * z.real();
                }
            }
            return TensorSample::isotropic(std::exp(h));
        }
        case MediumFamily::fractal: {
            const double u = std::min(std::max((x.x + 1.0) / 2.0, 0.0), 1.0 - 1e-15);
            const double v = std::min(std::max((x.y + 1.0) / 2.0, 0.0), 1.0 - 1e-15);
            double a = 1.0;
            for (int i = 1; i <= 6; ++i) {
                const double cells = std::pow(2.0, i);
                const auto p = static_cast<std::uint64_t>(u * cells);
                const auto q = static_cast<std::uint64_t>(v * cells);
                const double tcell = 0.1 / std::pow(4.0, i);
                const auto k = static_cast<std::uint64_t>(std::max(t, 0.0) / tcell);
                a *= rng_.uniform(gamma_, 1.0 / gamma_, static_cast<std::uint64_t>(i),
                                  (p << 32) | q, k);
            }
            return TensorSample::isotropic(a);
        }
        case MediumFamily::custom:
            return custom_(x, t);
    }
    return TensorSample::isotropic(1.0);
}

TensorSample sample_tensor(const Medium& medium, Vec2 x, double t) { return medium.sample(x, t); }

void export_field_csv(const Medium& medium, int m, double t, std::ostream& out) {
    out << "x,y,t,a11,a12,a22\n";
    char buf[160];
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const Vec2 p{-1.0 + 2.0 * i / (m - 1), -1.0 + 2.0 * j / (m - 1)};
            const TensorSample a = medium.sample(p, t);
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", p.x, p.y, t,
                          a.a11, a.a12, a.a22);
            out << buf;
        }
    }
}

}  // namespace parhom
