#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace augdl {

using Rng = std::mt19937_64;

/// splitmix64 finalizer. Used to turn (seed, salt...) tuples into
/// well-separated stream seeds so parallel work items never share a stream.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a stream seed from a base seed and an ordered list of salts.
/// Order-sensitive: derive_seed(s, 1, 2) != derive_seed(s, 2, 1).
template <typename... Salts>
constexpr std::uint64_t derive_seed(std::uint64_t base, Salts... salts) {
    std::uint64_t h = mix64(base);
    ((h = mix64(h ^ static_cast<std::uint64_t>(salts))), ...);
    return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Bit pattern of a double, for salting streams with real-valued parameters.
inline std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace augdl
