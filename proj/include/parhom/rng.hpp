#pragma once

#include <cstdint>

namespace parhom {

// Counter-based generator: every draw is a pure function of (seed, key...),
// so fields keyed by cell index are independent of iteration order and
// thread count.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t k0, std::uint64_t k1 = 0, std::uint64_t k2 = 0) const {
        std::uint64_t h = mix(seed_ ^ 0x9e3779b97f4a7c15ull);
        h = mix(h ^ k0);
        h = mix(h ^ k1);
        h = mix(h ^ k2);
        return h;
    }

    // uniform in [0,1), 53 mantissa bits
    double uniform01(std::uint64_t k0, std::uint64_t k1 = 0, std::uint64_t k2 = 0) const {
        return static_cast<double>(bits(k0, k1, k2) >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi, std::uint64_t k0, std::uint64_t k1 = 0,
                   std::uint64_t k2 = 0) const {
        return lo + (hi - lo) * uniform01(k0, k1, k2);
    }

    // derive an independent stream (e.g. one per medium layer)
    CounterRng split(std::uint64_t stream) const { return CounterRng(bits(0xdecafbadull, stream)); }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

}  // namespace parhom
