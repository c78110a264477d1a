#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace beep {

// Deterministic, platform-independent generator (splitmix64-seeded
// xoshiro256**). All protocol randomness goes through this so traces are
// reproducible bit-for-bit across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) {
        uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // 53-bit mantissa uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform in [0, n).
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

    // Uniform in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) { return lo + below(hi - lo + 1); }

    static uint64_t mix(uint64_t a, uint64_t b) {
        uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        return splitmix64(x);
    }

private:
    static uint64_t splitmix64(uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    uint64_t s_[4];
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int floor_log2(int n) {
    if (n < 1) throw std::invalid_argument("floor_log2: n must be >= 1");
    int r = 0;
    while (n > 1) {
        n >>= 1;
        ++r;
    }
    return r;
}

// Smallest w with 2^w >= n, i.e. ceil(log2 n) for n >= 1.
inline int ceil_log2(int n) {
    if (n < 1) throw std::invalid_argument("ceil_log2: n must be >= 1");
    int w = 0;
    while ((1LL << w) < n) ++w;
    return w;
}

}  // namespace beep
