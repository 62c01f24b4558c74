#pragma once

#include <cmath>
#include <cstdint>

namespace mginf {

// splitmix64: 64-bit state advanced by the golden-gamma increment, output
// mixed by two multiply-xorshift rounds. Single-stream; replications derive
// independent streams as seed + replication index.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1), using the top 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Exponential variate by inverse transform; finite for every draw.
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

private:
    std::uint64_t state_;
};

}  // namespace mginf
