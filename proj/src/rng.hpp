#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace mink {

/* splitmix64 step; used to derive well-separated streams from one seed. */
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/* FNV-1a over a byte string, folded into a caller-provided basis so the
   same label hashes differently under different top-level seeds. */
inline std::uint64_t hash_label(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ull ^ seed;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::uint64_t s = h;
    return splitmix64(s);
}

/* Mix an index into a stream seed (e.g. per-triple, per-restart substreams).
   Stable in all arguments, so adding restarts never reshuffles earlier ones. */
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
    return splitmix64(s);
}

/* Deterministic uniform generator.  mt19937_64's output sequence is pinned
   by the standard; the double conversions below avoid std::uniform_*
   distributions, whose exact streams are implementation-defined. */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /* uniform in [0, 1), 53-bit resolution */
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /* uniform in [lo, hi) */
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /* uniform on (lo, hi]: maps [0,1) through hi - u*(hi-lo) */
    double uniform_left_open(double lo, double hi) {
        return hi - (hi - lo) * uniform();
    }

    /* uniform integer in [0, n) by rejection-free scaling (n small) */
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    /* standard normal via Box-Muller on the deterministic uniforms */
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace mink
