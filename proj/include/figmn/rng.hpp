#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace figmn {

/// mt19937_64 with explicit transforms on top, so streams are reproducible
/// across standard library implementations (std::normal_distribution and
/// friends are not pinned by the standard).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return (gen_() >> 11) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, n).
    int uniform_int(int n) {
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do { v = gen_(); } while (v >= limit);
        return static_cast<int>(v % bound);
    }

    double normal() {  // Box-Muller, one value cached
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace figmn
