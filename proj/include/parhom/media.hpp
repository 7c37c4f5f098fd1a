#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "parhom/mesh.hpp"
#include "parhom/rng.hpp"

namespace parhom {

struct TensorSample {
    double a11 = 1.0;
    double a12 = 0.0;
    double a22 = 1.0;

    bool spd() const { return a11 > 0.0 && a11 * a22 - a12 * a12 > 0.0; }
    double lambda_min() const;
    double lambda_max() const;
    static TensorSample isotropic(double c) { return {c, 0.0, c}; }
};

enum class MediumFamily {
    identity,
    percolation,
    trig_multiscale,
    fourier_modes,
    fractal,
    channel,
    custom,
};

const char* family_name(MediumFamily f);

// Coefficient field a(x,t). All paper families are isotropic (scalar) but the
// sampling interface is a full symmetric 2x2 tensor.
class Medium {
public:
    using CustomFn = std::function<TensorSample(Vec2, double)>;

    static Medium identity();
    // per-triangle iid {1,100} on the given mesh
    static Medium site_percolation(const Mesh& mesh, std::uint64_t seed);
    // deterministic multiscale trigonometric field, time dependent
    static Medium trig_multiscale();
    // a = exp(h), h a random Fourier sum with modes |k|_inf <= 4,
    // coefficients iid uniform on [-amplitude, amplitude]
    static Medium random_fourier(std::uint64_t seed, double amplitude = 0.2);
    // product of 6 piecewise-constant layers on dyadic space-time cells,
    // cell values iid uniform on [gamma, 1/gamma]
    static Medium random_fractal(std::uint64_t seed, double gamma = 0.7);
    // 100 inside a fixed S-shaped channel, U[0.5,1.5] per triangle elsewhere
    static Medium channel(const Mesh& mesh, std::uint64_t seed);
    static Medium custom(CustomFn fn, bool time_dependent);

    MediumFamily family() const { return family_; }
    bool time_dependent() const { return time_dependent_; }
    std::uint64_t seed() const { return rng_.seed(); }

    TensorSample sample(Vec2 x, double t) const;  // throws OutOfDomainError

    // scalar value helpers used by the per-triangle families
    double percolation_value(int tri) const;
    double channel_value(int tri) const;
    static bool in_channel(Vec2 p);

private:
    Medium(MediumFamily f, std::uint64_t seed, bool time_dependent)
        : family_(f), rng_(seed), time_dependent_(time_dependent) {}

    int triangle_of(Vec2 x) const;  // analytic cell lookup on the generating grid

    MediumFamily family_;
    CounterRng rng_;
    bool time_dependent_ = false;
    int gen_n_ = 0;  // subdivision of the generating mesh (per-triangle families)
    double gamma_ = 0.7;
    std::vector<double> fourier_coef_;  // (a_k, b_k) interleaved, 9x9 mode grid
    CustomFn custom_;
};

TensorSample sample_tensor(const Medium& medium, Vec2 x, double t);

// CSV grid dump `x,y,t,a11,a12,a22` on an m x m grid
void export_field_csv(const Medium& medium, int m, double t, std::ostream& out);

}  // namespace parhom
