#include "manet/plot_data.h"

#include <algorithm>
#include <stdexcept>

namespace manet
{

std::string
FormatPlotTime(SimTime t)
{
    std::string s = t.ToString();
    auto dot = s.find('.');
    while (s.size() > dot + 2 && s.back() == '0')
    {
        s.pop_back();
    }
    return s;
}

std::string
EmitPlotData(const ThroughputSeries& series)
{
    std::string out = "# time delivered_bits bin_width=" + FormatPlotTime(series.binWidth) + "\n";
    for (const auto& bin : series.bins)
    {
        out += FormatPlotTime(bin.start);
        out += ' ';
        out += std::to_string(bin.bits);
        out += '\n';
    }
    return out;
}

std::string
EmitComparePlotData(const ThroughputSeries& a,
                    const ThroughputSeries& b,
                    std::string_view labelA,
                    std::string_view labelB)
{
    if (a.binWidth != b.binWidth)
    {
        throw std::invalid_argument("compared series use different bin widths");
    }
    std::string out = "# time ";
    out += labelA;
    out += ' ';
    out += labelB;
    out += " bin_width=" + FormatPlotTime(a.binWidth) + "\n";
    size_t n = std::max(a.bins.size(), b.bins.size());
    for (size_t i = 0; i < n; ++i)
    {
        SimTime start = SimTime::FromMicros(a.binWidth.Micros() * static_cast<int64_t>(i));
        out += FormatPlotTime(start);
        out += ' ';
        out += std::to_string(i < a.bins.size() ? a.bins[i].bits : 0);
        out += ' ';
        out += std::to_string(i < b.bins.size() ? b.bins[i].bits : 0);
        out += '\n';
    }
    return out;
}

} // namespace manet
