#pragma once

#include <cstdint>

namespace bsync {

// splitmix64 finalizer; stable across platforms and compilers.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Order-dependent combine of a base seed with any number of stream tags.
// Used to derive independent sub-seeds (symbols, noise, per-trial streams).
template <class... Parts>
std::uint64_t seed_hash(std::uint64_t base, Parts... parts) {
    std::uint64_t h = mix64(base);
    ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(parts)))), ...);
    return h;
}

} // namespace bsync
