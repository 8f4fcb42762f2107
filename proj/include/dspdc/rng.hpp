#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace dspdc {

// Deterministic random source. mt19937_64 supplies the bit stream; the
// derived draws (bounded ints, uniforms, normals) are implemented here so
// sequences do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, bound) via bitmask rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::next_below: bound must be positive");
        if (bound == 1) return 0;
        const std::uint64_t mask = mask_for(bound - 1);
        std::uint64_t v;
        do {
            v = engine_() & mask;
        } while (v >= bound);
        return v;
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the spare is cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        while (u1 <= 0.0) u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mask_for(std::uint64_t x) {
        std::uint64_t m = x;
        m |= m >> 1;
        m |= m >> 2;
        m |= m >> 4;
        m |= m >> 8;
        m |= m >> 16;
        m |= m >> 32;
        return m;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dspdc
