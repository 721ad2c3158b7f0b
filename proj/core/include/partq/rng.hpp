#pragma once

#include <cstdint>
#include <vector>

#include "partq/rational.hpp"

namespace partq {

/// SplitMix64 generator. One instance per (seed, stream) pair gives
/// reproducible, order-independent sample streams.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound) by rejection (bound > 0).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        for (;;) {
            std::uint64_t v = next();
            if (v < limit) return v % bound;
        }
    }

  private:
    std::uint64_t state_;
};

/// Derive an independent stream for (seed, index, salt). The mixing keeps
/// streams decorrelated so per-sample work can run in any order or thread.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t index,
                                std::uint64_t salt = 0) {
    SplitMix64 mixer(seed ^ 0x6a09e667f3bcc909ULL);
    std::uint64_t a = mixer.next();
    SplitMix64 mixer2(index ^ 0xbb67ae8584caa73bULL);
    std::uint64_t b = mixer2.next();
    SplitMix64 mixer3(salt ^ 0x3c6ef372fe94f82bULL);
    std::uint64_t c = mixer3.next();
    return SplitMix64(a ^ (b * 0x9e3779b97f4a7c15ULL) ^ (c << 1));
}

/// Exactly nbits random bits as a nonnegative integer (< 2^nbits).
inline BigInt random_bits(SplitMix64& rng, long nbits) {
    if (nbits <= 0) return BigInt(0);
    const long words = (nbits + 63) / 64;
    std::vector<std::uint64_t> buf(static_cast<std::size_t>(words));
    for (auto& w : buf) w = rng.next();
    const long excess = words * 64 - nbits;
    if (excess > 0) buf.back() >>= excess;
    BigInt z;
    mpz_import(z.get_mpz_t(), buf.size(), -1 /*least significant word first*/,
               sizeof(std::uint64_t), 0, 0, buf.data());
    return z;
}

} // namespace partq
