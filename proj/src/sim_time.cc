#include "manet/sim_time.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace manet
{

SimTime
SimTime::FromSeconds(double seconds)
{
    return FromMicros(std::llround(seconds * 1e6));
}

std::string
SimTime::ToString() const
{
    int64_t whole = m_us / 1000000;
    int64_t frac = std::llabs(m_us % 1000000);
    char buf[48];
    if (m_us < 0 && whole == 0)
    {
        std::snprintf(buf, sizeof(buf), "-0.%06lld", static_cast<long long>(frac));
    }
    else
    {
        std::snprintf(buf,
                      sizeof(buf),
                      "%lld.%06lld",
                      static_cast<long long>(whole),
                      static_cast<long long>(frac));
    }
    return buf;
}

} // namespace manet
