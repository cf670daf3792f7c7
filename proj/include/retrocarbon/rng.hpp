#pragma once

#include <cstdint>
#include <random>

namespace retrocarbon {

// Named stream families. A stream is identified by (seed, family, index) so
// that adding agents of one family never shifts the draws of another.
enum class StreamFamily : std::uint64_t {
    damage = 1,     // index = vintage
    polluter = 2,   // index = polluter ordinal
    supplier = 3,
    insurer = 4,
    auction = 5,
    bootstrap = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, StreamFamily family, std::uint64_t index) {
    const std::uint64_t mixed =
        splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(family)) ^ index);
    return std::mt19937_64(mixed);
}

}  // namespace retrocarbon
