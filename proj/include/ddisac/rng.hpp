#pragma once

#include <cstdint>
#include <random>

#include "ddisac/types.hpp"

namespace ddisac {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed and a tuple of indices.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// seed = splitmix64(splitmix64(splitmix64(master) ^ a) ^ b)
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept;

/// Portable random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard library distributions are not portable across
/// implementations, so all variates are produced here from raw engine
/// output:
///   uniform()  = (u >> 11) * 2^-53                       in [0, 1)
///   normal()   = Box-Muller, cosine branch only, u1 mapped to (0, 1]
///   complex_normal(v) = sqrt(v/2) * (normal() + j normal())
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    double normal();
    cplx complex_normal(double variance);
    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);
    /// Unit-modulus complex number with uniform phase.
    cplx unit_phase();

private:
    std::mt19937_64 engine_;
};

} // namespace ddisac
