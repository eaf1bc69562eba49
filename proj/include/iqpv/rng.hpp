#pragma once

#include <cstdint>
#include <random>

#include "iqpv/errors.hpp"

namespace iqpv {

/// Seedable, splittable random source.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard. The
/// bounded-integer and real draws are implemented here rather than through
/// std::uniform_*_distribution (whose algorithms are implementation-defined), so
/// a given seed yields the same stream on every toolchain.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) {
            throw InvalidParameter("uniform_below: bound must be positive");
        }
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform real in [0, 1) with 53 random mantissa bits.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform n-bit word, n <= 64.
    std::uint64_t uniform_bits(unsigned n) {
        if (n > 64) {
            throw InvalidParameter("uniform_bits: at most 64 bits");
        }
        if (n == 0) {
            return 0;
        }
        const std::uint64_t x = engine_();
        return n == 64 ? x : (x & ((std::uint64_t{1} << n) - 1));
    }

    /// Child stream whose seed is derived from this stream (splitmix64 finalizer).
    Rng split() {
        std::uint64_t z = engine_() + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return Rng(z ^ (z >> 31));
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace iqpv
