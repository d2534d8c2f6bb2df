#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace uavcov {

/// SplitMix64 mixing step. Used to derive well-separated stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for the substream identified by (master_seed, index). Two mixing
/// rounds so consecutive indices land far apart in seed space; results do
/// not depend on which worker consumes the stream.
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index)
{
    std::uint64_t s = master_seed ^ 0x6a09e667f3bcc909ULL;
    std::uint64_t a = splitmix64(s);
    s ^= index;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x9e3779b97f4a7c15ULL * (index + 1));
}

inline std::mt19937_64 make_substream(std::uint64_t master_seed, std::uint64_t index)
{
    return std::mt19937_64(substream_seed(master_seed, index));
}

// Sampling below is spelled out on raw 64-bit draws instead of the
// <random> distribution adaptors, whose output is implementation-defined;
// mt19937_64 itself is pinned by the standard, so these are bit-exact on
// every platform.

/// Uniform double in (0, 1].
template <class Rng>
double uniform_unit_positive(Rng& rng)
{
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform double in [0, 1).
template <class Rng>
double uniform_unit(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unit-rate exponential variate.
template <class Rng>
double exponential_sample(Rng& rng)
{
    return -std::log(uniform_unit_positive(rng));
}

/// Poisson variate by counting unit-rate arrivals in [0, mean]. Exact for
/// any mean without the e^{-mean} underflow of the product method.
template <class Rng>
std::size_t poisson_sample(double mean, Rng& rng)
{
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson_sample: mean must be finite and >= 0");
    std::size_t count = 0;
    double t = exponential_sample(rng);
    while (t <= mean) {
        ++count;
        t += exponential_sample(rng);
    }
    return count;
}

} // namespace uavcov
