#pragma once

/// Seeded random streams. Every random decision in the project draws from a
/// named sub-stream derived from one master seed, so experiment artifacts are
/// reproducible from the manifest alone.

#include <cstdint>
#include <random>
#include <string_view>

namespace vnfprof {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

/// Derive the seed of a named sub-stream, e.g. substream_seed(42, "env", 3).
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                                    std::uint64_t index = 0) {
    std::uint64_t h = detail::splitmix64(master ^ detail::fnv1a(name));
    return detail::splitmix64(h ^ detail::splitmix64(index));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    Rng(std::uint64_t master, std::string_view name, std::uint64_t index = 0)
        : engine_(substream_seed(master, name, index)) {}

    double uniform() { return uni_(engine_); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uni_(engine_); }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    double gaussian(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uni_{0.0, 1.0};
};

} // namespace vnfprof
