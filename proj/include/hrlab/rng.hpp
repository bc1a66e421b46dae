#pragma once
// Counter-based random streams (Philox4x32-10, Salmon et al. SC 2011).
//
// Every draw is a pure function of (seed, stream, step), so path p of a
// simulation can be generated on any thread, in any order, with identical
// output.  Streams partition as:
//   - stream = p            : increments of path p
//   - stream = tagged hash  : auxiliary consumers (bootstrap resampling, ...)
// The top bit of tagged streams is forced to 1 so they can never collide
// with path indices.

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>

namespace hrlab {

using Counter4 = std::array<std::uint32_t, 4>;

namespace detail {
inline void philox_round(Counter4& c, std::uint32_t k0, std::uint32_t k1) {
    constexpr std::uint32_t M0 = 0xD2511F53u;
    constexpr std::uint32_t M1 = 0xCD9E8D57u;
    std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c[2];
    auto lo0 = static_cast<std::uint32_t>(p0), hi0 = static_cast<std::uint32_t>(p0 >> 32);
    auto lo1 = static_cast<std::uint32_t>(p1), hi1 = static_cast<std::uint32_t>(p1 >> 32);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}
}  // namespace detail

// The 10-round Philox4x32 block function: counter + 64-bit key -> 4 words.
inline Counter4 philox4x32(Counter4 ctr, std::uint32_t key0, std::uint32_t key1) {
    constexpr std::uint32_t W0 = 0x9E3779B9u;
    constexpr std::uint32_t W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        detail::philox_round(ctr, key0, key1);
        if (round != 9) {
            key0 += W0;
            key1 += W1;
        }
    }
    return ctr;
}

// FNV-1a hash of a tag, with the top bit set so tagged streams live in a
// separate namespace from path-index streams.
inline std::uint64_t stream_from_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h | 0x8000000000000000ull;
}

// One logical random stream: seed is the key, (step, stream) the counter.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_(stream) {}

    Counter4 quad(std::uint64_t step) const {
        Counter4 ctr = {static_cast<std::uint32_t>(step),
                        static_cast<std::uint32_t>(step >> 32),
                        static_cast<std::uint32_t>(stream_),
                        static_cast<std::uint32_t>(stream_ >> 32)};
        return philox4x32(ctr, key0_, key1_);
    }

    std::uint64_t bits64(std::uint64_t step) const {
        Counter4 q = quad(step);
        return (static_cast<std::uint64_t>(q[1]) << 32) | q[0];
    }

    // Uniform on the open interval (0,1); safe under log() and pow(-1/g).
    double uniform(std::uint64_t step) const {
        return (static_cast<double>(bits64(step) >> 11) + 0.5) * 0x1p-53;
    }

    // Two independent N(0,1) draws per step (Box-Muller on one 128-bit block).
    std::pair<double, double> normal_pair(std::uint64_t step) const {
        Counter4 q = quad(step);
        std::uint64_t a = (static_cast<std::uint64_t>(q[1]) << 32) | q[0];
        std::uint64_t b = (static_cast<std::uint64_t>(q[3]) << 32) | q[2];
        double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1p-53;  // (0,1]
        double u2 = static_cast<double>(b >> 11) * 0x1p-53;          // [0,1)
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 2.0 * M_PI * u2;
        return {rad * std::cos(ang), rad * std::sin(ang)};
    }

    double normal(std::uint64_t step) const { return normal_pair(step).first; }

    // Fair ±1.
    double rademacher(std::uint64_t step) const {
        return (quad(step)[0] & 1u) ? 1.0 : -1.0;
    }

    // Uniform index in [0, bound); bound << 2^53 keeps the modulo bias
    // far below anything a 10^3-resample bootstrap could resolve.
    std::uint64_t index(std::uint64_t step, std::uint64_t bound) const {
        return static_cast<std::uint64_t>(uniform(step) * static_cast<double>(bound)) % bound;
    }

private:
    std::uint32_t key0_, key1_;
    std::uint64_t stream_;
};

}  // namespace hrlab
