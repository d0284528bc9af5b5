#ifndef MANET_RNG_H
#define MANET_RNG_H

#include <array>
#include <cstdint>
#include <string_view>

namespace manet
{

/**
 * Portable pseudo-random stream: xoshiro256** seeded through splitmix64.
 *
 * The state is derived from (seed, FNV-1a hash of the stream label), so the
 * same pair yields the same sequence on every platform. Floating-point
 * conversions use the top 53 bits and never go through <random>
 * distributions, whose output is implementation-defined.
 */
class RngStream
{
  public:
    RngStream(uint64_t seed, std::string_view streamId);

    uint64_t NextU64();

    /// Uniform in [0, 1).
    double Uniform01();

    /// Uniform in [lo, hi).
    double Uniform(double lo, double hi)
    {
        return lo + (hi - lo) * Uniform01();
    }

    bool Bernoulli(double p)
    {
        return Uniform01() < p;
    }

  private:
    std::array<uint64_t, 4> m_s{};
};

} // namespace manet

#endif
