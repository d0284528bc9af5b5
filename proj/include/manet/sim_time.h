#ifndef MANET_SIM_TIME_H
#define MANET_SIM_TIME_H

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace manet
{

/**
 * Simulation time with microsecond resolution.
 *
 * Stored as a signed count of microseconds so that event ordering never
 * depends on floating-point rounding. Rendered as decimal seconds with six
 * fractional digits.
 */
class SimTime
{
  public:
    constexpr SimTime() = default;

    static constexpr SimTime FromMicros(int64_t us)
    {
        SimTime t;
        t.m_us = us;
        return t;
    }

    /// Rounds to the nearest microsecond.
    static SimTime FromSeconds(double seconds);

    static constexpr SimTime Max()
    {
        return FromMicros(std::numeric_limits<int64_t>::max());
    }

    constexpr int64_t Micros() const
    {
        return m_us;
    }

    constexpr double Seconds() const
    {
        return static_cast<double>(m_us) / 1e6;
    }

    /// Exactly six fractional digits, e.g. "55.002500".
    std::string ToString() const;

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime operator+(SimTime o) const
    {
        return FromMicros(m_us + o.m_us);
    }

    constexpr SimTime operator-(SimTime o) const
    {
        return FromMicros(m_us - o.m_us);
    }

    constexpr SimTime& operator+=(SimTime o)
    {
        m_us += o.m_us;
        return *this;
    }

  private:
    int64_t m_us{0};
};

inline SimTime
Seconds(double s)
{
    return SimTime::FromSeconds(s);
}

} // namespace manet

#endif
