///
/// \file rng.hpp
///
/// Seeded random generation with platform-independent output. All randomness
/// in the library flows through Rng so that a fixed seed reproduces bit-equal
/// masks, noise, and trial streams regardless of the standard library's
/// distribution implementations.
///
#ifndef WLIDOA_RNG_HPP
#define WLIDOA_RNG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>

#include "wlidoa/types.hpp"

namespace wlidoa {

/// splitmix64 mixing step; used both as a hash and for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Combines a seed with additional tokens (sweep value bits, trial index, ...)
/// into a new stream seed.
inline std::uint64_t hash_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
{
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

/// Bit pattern of a double, for hashing real-valued sweep points.
inline std::uint64_t double_bits(double v)
{
    std::uint64_t u;
    static_assert(sizeof(u) == sizeof(v));
    std::memcpy(&u, &v, sizeof(u));
    return u;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0,1) with 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection; bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound)
    {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    /// Standard normal via Box-Muller (no cached spare: keeps the stream
    /// position independent of call interleaving).
    double gaussian()
    {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    /// Circular complex gaussian with E|z|^2 = 1.
    Complex complex_gaussian()
    {
        const double re = gaussian();
        const double im = gaussian();
        return Complex(re * M_SQRT1_2, im * M_SQRT1_2);
    }

    /// Sorted uniformly random m-subset of {1,...,n} (1-based), via partial
    /// Fisher-Yates.
    IndexSet subset(int n, int m)
    {
        detail::check(m >= 1 && m <= n, "invalid-argument: need 1 <= M <= N");
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) {
            pool[i] = i + 1;
        }
        for (int i = 0; i < m; ++i) {
            const int j = i + static_cast<int>(uniform_below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
        }
        IndexSet out(pool.begin(), pool.begin() + m);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace wlidoa

#endif // WLIDOA_RNG_HPP
