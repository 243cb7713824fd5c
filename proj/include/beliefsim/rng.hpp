#pragma once

#include <cmath>
#include <cstdint>

namespace beliefsim {

// Counter-based random stream (splitmix64). Every draw is a pure function of
// (seed, stream, counter), so experiments replay bit-identically regardless
// of thread interleaving or call-site reordering.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix(seed + 0x9e3779b97f4a7c15ull * (stream + 1))) {}

    std::uint64_t next_u64() {
        return mix(base_ + 0x9e3779b97f4a7c15ull * ++counter_);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, n), n > 0
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // standard normal, Box-Muller (two draws per call, counter stays pure)
    double next_gaussian() {
        double u1 = 1.0 - next_double();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::uint64_t counter() const { return counter_; }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace beliefsim
