#ifndef MANET_REPORT_H
#define MANET_REPORT_H

#include "manet/scenario.h"
#include "manet/traffic.h"

#include <string>
#include <string_view>

namespace manet
{

/// Machine-readable `key=value` lines, one per metric, stable key order.
std::string RenderSummaryKeyValues(const Scenario& scenario, const RunSummary& summary);

/// Human-readable table of the same metrics.
std::string RenderSummaryTable(const Scenario& scenario, const RunSummary& summary);

/// Side-by-side table: delivery ratio, control packets, mean hops and more.
std::string RenderComparison(std::string_view labelA,
                             const RunSummary& a,
                             std::string_view labelB,
                             const RunSummary& b);

/// `key=value` form of the comparison, keys prefixed `a.` and `b.`.
std::string RenderComparisonKeyValues(std::string_view labelA,
                                      const RunSummary& a,
                                      std::string_view labelB,
                                      const RunSummary& b);

} // namespace manet

#endif
