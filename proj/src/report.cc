#include "manet/report.h"

#include <cstdio>
#include <utility>
#include <vector>

namespace manet
{

namespace
{

std::string
Fixed(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>>
Metrics(const RunSummary& s)
{
    std::vector<std::pair<std::string, std::string>> m{
        {"sent", std::to_string(s.sent)},
        {"delivered", std::to_string(s.delivered)},
        {"delivered_bits", std::to_string(s.deliveredBits)},
        {"delivery_ratio", Fixed(s.DeliveryRatio())},
        {"mean_hops", Fixed(s.MeanHops())},
        {"dropped", std::to_string(s.TotalDropped())},
    };
    for (auto reason : {DropReason::NoRoute,
                        DropReason::Ttl,
                        DropReason::BufferOverflow,
                        DropReason::LinkDownInFlight,
                        DropReason::EndOfRun})
    {
        auto it = s.dropped.find(reason);
        m.emplace_back("dropped." + std::string(DropName(reason)),
                       std::to_string(it == s.dropped.end() ? 0 : it->second));
    }
    m.emplace_back("control_packets", std::to_string(s.TotalControl()));
    for (auto kind : {PacketKind::Rreq, PacketKind::Rrep, PacketKind::Rerr, PacketKind::Dsdv})
    {
        auto it = s.control.find(kind);
        m.emplace_back("control." + std::string(ToString(kind)),
                       std::to_string(it == s.control.end() ? 0 : it->second));
    }
    return m;
}

std::string
Pad(std::string s, size_t width)
{
    if (s.size() < width)
    {
        s.append(width - s.size(), ' ');
    }
    return s;
}

} // namespace

std::string
RenderSummaryKeyValues(const Scenario& scenario, const RunSummary& summary)
{
    std::string out;
    out += "protocol=" + std::string(ToString(scenario.protocol)) + "\n";
    out += "seed=" + std::to_string(scenario.seed) + "\n";
    out += "duration=" + scenario.duration.ToString() + "\n";
    out += "nodes=" + std::to_string(scenario.nodes.size()) + "\n";
    out += "flows=" + std::to_string(scenario.flows.size()) + "\n";
    for (const auto& [k, v] : Metrics(summary))
    {
        out += k + "=" + v + "\n";
    }
    return out;
}

std::string
RenderSummaryTable(const Scenario& scenario, const RunSummary& summary)
{
    std::string out = Pad("protocol", 28) + std::string(ToString(scenario.protocol)) + "\n";
    out += Pad("duration", 28) + scenario.duration.ToString() + "\n";
    out += Pad("seed", 28) + std::to_string(scenario.seed) + "\n";
    for (const auto& [k, v] : Metrics(summary))
    {
        out += Pad(k, 28) + v + "\n";
    }
    return out;
}

std::string
RenderComparison(std::string_view labelA,
                 const RunSummary& a,
                 std::string_view labelB,
                 const RunSummary& b)
{
    auto ma = Metrics(a);
    auto mb = Metrics(b);
    std::string out = Pad("metric", 28) + Pad(std::string(labelA), 20) + std::string(labelB) + "\n";
    for (size_t i = 0; i < ma.size(); ++i)
    {
        out += Pad(ma[i].first, 28) + Pad(ma[i].second, 20) + mb[i].second + "\n";
    }
    return out;
}

std::string
RenderComparisonKeyValues(std::string_view labelA,
                          const RunSummary& a,
                          std::string_view labelB,
                          const RunSummary& b)
{
    std::string out = "a=" + std::string(labelA) + "\nb=" + std::string(labelB) + "\n";
    for (const auto& [k, v] : Metrics(a))
    {
        out += "a." + k + "=" + v + "\n";
    }
    for (const auto& [k, v] : Metrics(b))
    {
        out += "b." + k + "=" + v + "\n";
    }
    return out;
}

} // namespace manet
