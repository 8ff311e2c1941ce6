// rng.hpp
// Deterministic random streams keyed by (master seed, node, trajectory).

#pragma once

#include <cstdint>
#include <random>

namespace bayesphase {

class RngStream {
public:
    // Every (seed, a, b) triple maps to an independent Mersenne Twister state.
    RngStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(a),
                          static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b),
                          static_cast<std::uint32_t>(b >> 32)};
        engine_.seed(seq);
    }

    // Uniform on [0, 1) with 53 random bits; independent of the standard
    // library's distribution implementations.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace bayesphase
