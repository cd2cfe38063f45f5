#ifndef SIGHEDGE_RNG_HPP
#define SIGHEDGE_RNG_HPP

#include <cstdint>
#include <random>

namespace sighedge {

// splitmix64: used to derive independent per-path substreams from
// (seed, path index) so results do not depend on thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t path,
                                    std::uint64_t tag = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(path + 1)) ^ splitmix64(tag));
}

inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path,
                                std::uint64_t tag = 0) {
    return std::mt19937_64(substream_seed(seed, path, tag));
}

// Counter-based uniform in (0,1): stateless, used for the per-segment
// bridge draws so consumption order cannot drift between strategies.
inline double counter_uniform(std::uint64_t seed, std::uint64_t path,
                              std::uint64_t step, std::uint64_t tag) {
    std::uint64_t x = splitmix64(substream_seed(seed, path, tag) ^ splitmix64(step + 17));
    // top 53 bits -> (0,1)
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace sighedge

#endif
