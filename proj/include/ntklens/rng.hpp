#pragma once

#include <cstdint>

namespace ntklens {

// Counter-based pseudo-random stream. Each stream is (key, counter); draws
// hash the counter under the key (SplitMix64 construction), so streams can
// be split into statistically independent children without coordination and
// the same (seed, stream id, draw index) always yields the same value on
// every platform. No global state anywhere.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    // Independent child stream; deterministic in (parent identity, child id).
    RngStream split(std::uint64_t child) const;

    std::uint64_t next_u64();
    double next_unit();      // uniform [0, 1), 53-bit mantissa
    double next_unit_open(); // uniform (0, 1], safe for log()
    double next_gaussian();  // standard normal, Box-Muller
    // integer in [0, n)
    std::uint64_t next_below(std::uint64_t n);

private:
    RngStream() = default;
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ntklens
