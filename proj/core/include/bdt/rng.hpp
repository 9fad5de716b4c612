#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace bdt {

// xorshift64* with the documented constants (shifts 12/25/27, multiplier
// 0x2545F4914F6CDD1D). Chosen so other implementations can reproduce the
// stream exactly from the same seed.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    // Uniform in [0, 1) from the top 53 bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

    // Box-Muller; consumes two uniforms per pair.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        const double u2 = next_double();
        if (u1 <= 0) u1 = 1.0 / 9007199254740992.0;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0;
};

} // namespace bdt
