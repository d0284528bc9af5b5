#include "manet/rng.h"

namespace manet
{

namespace
{

uint64_t
SplitMix64(uint64_t& x)
{
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t
Fnv1a(std::string_view s)
{
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t
Rotl(uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(uint64_t seed, std::string_view streamId)
{
    uint64_t x = seed ^ Fnv1a(streamId);
    for (auto& word : m_s)
    {
        word = SplitMix64(x);
    }
}

uint64_t
RngStream::NextU64()
{
    const uint64_t result = Rotl(m_s[1] * 5, 7) * 9;
    const uint64_t t = m_s[1] << 17;
    m_s[2] ^= m_s[0];
    m_s[3] ^= m_s[1];
    m_s[1] ^= m_s[2];
    m_s[0] ^= m_s[3];
    m_s[2] ^= t;
    m_s[3] = Rotl(m_s[3], 45);
    return result;
}

double
RngStream::Uniform01()
{
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

} // namespace manet
