#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace qlift {

using Int = mpz_class;

// Deterministic random source. Sampling is done on raw 64-bit words so the
// stream is identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t next() { return engine_(); }
    std::uint64_t seed() const { return seed_; }

    // Uniform in [0, n) for n > 0.
    std::uint64_t below(std::uint64_t n);
    // Uniform in [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi);
    // Uniform in [0, n) for arbitrary-precision n > 0.
    Int below(const Int& n);
    // Uniform in [lo, hi].
    Int range(const Int& lo, const Int& hi);

    // Independent child stream; the same (parent seed, tag) always gives the
    // same child.
    Rng split(std::uint64_t tag) const;

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace qlift
