#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ldpclab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Gaussian stream keyed by (seed, stream, frame) so any frame can be generated
// in isolation; results do not depend on how frames are split across workers.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame) {
        state_ = seed;
        (void)splitmix64(state_);
        state_ ^= splitmix64(state_) + stream;
        state_ ^= splitmix64(state_) + frame;
        (void)splitmix64(state_);
    }

    // uniform on (0, 1]
    double uniform() {
        return (static_cast<double>(splitmix64(state_) >> 11) + 1.0) * 0x1p-53;
    }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ldpclab
