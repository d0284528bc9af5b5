#include "manet/traffic.h"

#include <cmath>
#include <string>

namespace manet
{

SimTime
EmissionInterval(const Flow& flow)
{
    return SimTime::FromSeconds(flow.packetSize * 8.0 / flow.rate);
}

std::vector<SimTime>
EmissionTimes(const Flow& flow)
{
    std::vector<SimTime> times;
    const double bits = flow.packetSize * 8.0;
    for (uint64_t k = 0;; ++k)
    {
        auto offset = std::llround(static_cast<double>(k) * bits * 1e6 / flow.rate);
        SimTime t = flow.startAt + SimTime::FromMicros(offset);
        if (t >= flow.stopAt)
        {
            break;
        }
        times.push_back(t);
    }
    return times;
}

uint64_t
RunSummary::TotalDropped() const
{
    uint64_t total = 0;
    for (const auto& [reason, n] : dropped)
    {
        total += n;
    }
    return total;
}

uint64_t
RunSummary::TotalControl() const
{
    uint64_t total = 0;
    for (const auto& [kind, n] : control)
    {
        total += n;
    }
    return total;
}

double
RunSummary::DeliveryRatio() const
{
    return sent == 0 ? 0.0 : static_cast<double>(delivered) / static_cast<double>(sent);
}

double
RunSummary::MeanHops() const
{
    return delivered == 0 ? 0.0 : static_cast<double>(hopSum) / static_cast<double>(delivered);
}

void
RunAccounting::OnSent(const DataPacket& packet, uint64_t pktId, NodeId holder)
{
    if (m_finished.count(pktId) || m_outstanding.count(pktId))
    {
        throw DoubleAccounting("packet " + std::to_string(pktId) + " sent twice");
    }
    m_outstanding.emplace(pktId, InFlight{packet, holder});
    ++m_summary.sent;
}

void
RunAccounting::OnDelivered(uint64_t pktId, SimTime at, uint32_t hops)
{
    auto it = m_outstanding.find(pktId);
    if (it == m_outstanding.end())
    {
        throw DoubleAccounting("packet " + std::to_string(pktId) +
                               " delivered but not outstanding");
    }
    const DataPacket& p = it->second.packet;
    uint32_t bits = p.size * 8;
    m_deliveries.push_back({at, pktId, p.flowId, p.seqNo, bits, hops});
    ++m_summary.delivered;
    m_summary.deliveredBits += bits;
    m_summary.hopSum += hops;
    m_outstanding.erase(it);
    m_finished[pktId] = true;
}

void
RunAccounting::OnDropped(uint64_t pktId, DropReason reason)
{
    auto it = m_outstanding.find(pktId);
    if (it == m_outstanding.end())
    {
        throw DoubleAccounting("packet " + std::to_string(pktId) + " dropped but not outstanding");
    }
    ++m_summary.dropped[reason];
    m_outstanding.erase(it);
    m_finished[pktId] = false;
}

void
RunAccounting::OnControlSent(PacketKind kind)
{
    ++m_summary.control[kind];
}

void
RunAccounting::MoveTo(uint64_t pktId, NodeId holder)
{
    auto it = m_outstanding.find(pktId);
    if (it != m_outstanding.end())
    {
        it->second.holder = holder;
    }
}

std::vector<RunAccounting::Pending>
RunAccounting::Outstanding() const
{
    std::vector<Pending> out;
    out.reserve(m_outstanding.size());
    for (const auto& [id, f] : m_outstanding)
    {
        out.push_back({id, f.holder, f.packet});
    }
    return out;
}

uint64_t
ThroughputSeries::TotalBits() const
{
    uint64_t total = 0;
    for (const auto& b : bins)
    {
        total += b.bits;
    }
    return total;
}

ThroughputSeries
BuildThroughputSeries(std::span<const Delivery> deliveries, SimTime binWidth, SimTime runEnd)
{
    if (binWidth.Micros() <= 0)
    {
        throw std::invalid_argument("bin width must be positive");
    }
    const int64_t w = binWidth.Micros();
    int64_t count = (runEnd.Micros() + w - 1) / w;
    for (const auto& d : deliveries)
    {
        count = std::max<int64_t>(count, d.at.Micros() / w + 1);
    }
    ThroughputSeries series;
    series.binWidth = binWidth;
    series.bins.resize(static_cast<size_t>(count));
    for (int64_t i = 0; i < count; ++i)
    {
        series.bins[static_cast<size_t>(i)].start = SimTime::FromMicros(i * w);
    }
    for (const auto& d : deliveries)
    {
        series.bins[static_cast<size_t>(d.at.Micros() / w)].bits += d.bits;
    }
    return series;
}

} // namespace manet
