#pragma once

// Deterministic point sampling for residual checks. Doubles are produced
// from the raw mt19937_64 stream ((x >> 11) * 2^-53), not through
// distribution objects, so a (seed, samples) pair yields the same points on
// every platform. Default seed 0xC0FFEE.

#include <cstdint>
#include <random>
#include <vector>

#include "cxjet.hpp"

namespace waring {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

class PointSampler {
public:
    explicit PointSampler(std::uint64_t seed = kDefaultSeed) : rng_(seed) {}

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }

    /// Uniform in [lo, hi).
    double box(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform on the closed disc |z| <= radius. Each coordinate draws
    /// re then im from the bounding square and rejects outside the disc.
    Cx disc(double radius) {
        for (;;) {
            double re = box(-radius, radius);
            double im = box(-radius, radius);
            if (re * re + im * im <= radius * radius) return Cx(re, im);
        }
    }

    /// Uniform on the polydisc |z_j| <= radius in C^n.
    std::vector<Cx> polydisc(std::size_t n, double radius) {
        std::vector<Cx> z(n);
        for (auto& c : z) c = disc(radius);
        return z;
    }

    /// Uniform on the annulus rmin <= |z| <= rmax.
    Cx annulus(double rmin, double rmax) {
        for (;;) {
            Cx z = disc(rmax);
            double m2 = z.real() * z.real() + z.imag() * z.imag();
            if (m2 >= rmin * rmin) return z;
        }
    }

private:
    std::mt19937_64 rng_;
};

} // namespace waring
