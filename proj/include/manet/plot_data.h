#ifndef MANET_PLOT_DATA_H
#define MANET_PLOT_DATA_H

#include "manet/traffic.h"

#include <string>
#include <string_view>

namespace manet
{

/// Seconds with trailing zeros trimmed but at least one decimal: "10.0", "0.25".
std::string FormatPlotTime(SimTime t);

/// `# ...` header, then one `time bits` line per bin.
std::string EmitPlotData(const ThroughputSeries& series);

/// Three columns `time a b`; the shorter series is padded with zero bins.
/// Both series must share a bin width.
std::string EmitComparePlotData(const ThroughputSeries& a,
                                const ThroughputSeries& b,
                                std::string_view labelA,
                                std::string_view labelB);

} // namespace manet

#endif
