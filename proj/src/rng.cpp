#include "ntklens/rng.hpp"

#include <cmath>
#include <numbers>

namespace ntklens {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// Finalizer from SplitMix64 (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    key_ = mix64(mix64(seed + kGamma) ^ mix64(stream * 0xD1342543DE82EF95ull + 0x632BE59BD9B4E019ull));
}

RngStream RngStream::split(std::uint64_t child) const {
    RngStream out;
    out.key_ = mix64(key_ ^ mix64(child * kGamma + 0x9FB21C651E98DF25ull));
    return out;
}

std::uint64_t RngStream::next_u64() {
    counter_ += kGamma;
    return mix64(key_ ^ counter_);
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    // Rejection-free modulo is fine at desk scale; bias is ~n / 2^64.
    return next_u64() % n;
}

} // namespace ntklens
