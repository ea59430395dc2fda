#pragma once

#include <cstdint>

namespace wlanfair {

// xorshift64* generator (Vigna 2016). Chosen over std::mt19937 so that the
// event stream is reproducible bit-for-bit from the seed alone, independent
// of standard-library internals. State is never zero: the seed is passed
// through one splitmix64 step first.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        state_ = z != 0 ? z : 0x9e3779b97f4a7c15ull;
    }

    std::uint64_t next() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }

    // Uniform draw from [0, n) by 128-bit multiply-shift; bias is O(n / 2^64).
    int pick(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(next()) *
                                 static_cast<unsigned __int128>(n)) >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace wlanfair
