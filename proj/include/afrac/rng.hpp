#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "afrac/vec2.hpp"

namespace afrac {

// Seeded generator whose draws do not depend on the standard library's
// distribution implementations, so sampled results are portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::uint64_t index(std::uint64_t n) { return engine_() % n; }

    Vec2 in_disk(Vec2 c, double r) {
        const double rho = r * std::sqrt(uniform());
        const double t = 2.0 * M_PI * uniform();
        return {c.x + rho * std::cos(t), c.y + rho * std::sin(t)};
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace afrac
