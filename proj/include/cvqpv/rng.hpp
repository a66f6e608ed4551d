#pragma once

#include <boost/random/normal_distribution.hpp>

#include <cstdint>
#include <random>

namespace cvqpv {

/// Seeded random source: a 64-bit Mersenne twister plus a ziggurat standard
/// normal sampler.
class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}
    explicit Rng(std::seed_seq& seq) : engine_(seq) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    double normal() { return normal_(engine_); }
    double normal(double mean, double stddev) { return mean + stddev * normal_(engine_); }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Master seed for a named sub-experiment (e.g. honest vs attacker batches).
inline constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) {
    return splitmix64(master_seed ^ splitmix64(tag));
}

/// Independent generator for one stream (session, sweep cell, ...) of a
/// master seed. Streams depend only on (master, stream), never on the
/// order or thread in which they are created.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x51edc0deU};
    return Rng(seq);
}

} // namespace cvqpv
