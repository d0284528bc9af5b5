#ifndef MANET_TRAFFIC_H
#define MANET_TRAFFIC_H

#include "manet/mobility.h"
#include "manet/packet.h"
#include "manet/sim_time.h"
#include "manet/trace.h"

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace manet
{

/// Constant-bit-rate flow over the datagram service.
struct Flow
{
    uint32_t flowId{0};
    NodeId src{0};
    NodeId dst{0};
    SimTime startAt;
    SimTime stopAt;
    uint32_t packetSize{512}; ///< bytes
    double rate{16384.0};     ///< bits/s
};

/// packet_size * 8 / rate, rounded to the microsecond.
SimTime EmissionInterval(const Flow& flow);

/// start + k * interval for every k with time < stop. The k-th instant is
/// computed directly (not by accumulation) so rounding never drifts.
std::vector<SimTime> EmissionTimes(const Flow& flow);

struct Delivery
{
    SimTime at;
    uint64_t pktId{0};
    uint32_t flowId{0};
    uint64_t seqNo{0};
    uint32_t bits{0};
    uint32_t hops{0};
};

struct RunSummary
{
    uint64_t sent{0};
    uint64_t delivered{0};
    uint64_t deliveredBits{0};
    uint64_t hopSum{0};
    std::map<DropReason, uint64_t> dropped;
    std::map<PacketKind, uint64_t> control;

    uint64_t TotalDropped() const;
    uint64_t TotalControl() const;
    double DeliveryRatio() const;
    double MeanHops() const;
};

class DoubleAccounting : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/**
 * Tracks the fate of every data packet. Each packet is sent once and then
 * either delivered or dropped exactly once; accounting twice throws
 * DoubleAccounting.
 */
class RunAccounting
{
  public:
    void OnSent(const DataPacket& packet, uint64_t pktId, NodeId holder);
    void OnDelivered(uint64_t pktId, SimTime at, uint32_t hops);
    void OnDropped(uint64_t pktId, DropReason reason);
    void OnControlSent(PacketKind kind);

    /// Records which node currently holds an outstanding packet.
    void MoveTo(uint64_t pktId, NodeId holder);

    struct Pending
    {
        uint64_t pktId;
        NodeId holder;
        DataPacket packet;
    };

    /// Packets neither delivered nor dropped yet, in id order.
    std::vector<Pending> Outstanding() const;

    const RunSummary& Summary() const
    {
        return m_summary;
    }

    const std::vector<Delivery>& Deliveries() const
    {
        return m_deliveries;
    }

  private:
    struct InFlight
    {
        DataPacket packet;
        NodeId holder;
    };

    RunSummary m_summary;
    std::map<uint64_t, InFlight> m_outstanding;
    std::vector<Delivery> m_deliveries;
    std::unordered_map<uint64_t, bool> m_finished;
};

struct ThroughputBin
{
    SimTime start;
    uint64_t bits{0};

    bool operator==(const ThroughputBin&) const = default;
};

/// Delivered bits in half-open bins [t, t + width), from 0 through run end.
struct ThroughputSeries
{
    SimTime binWidth;
    std::vector<ThroughputBin> bins;

    uint64_t TotalBits() const;
};

/// Throws std::invalid_argument if binWidth <= 0.
ThroughputSeries BuildThroughputSeries(std::span<const Delivery> deliveries,
                                       SimTime binWidth,
                                       SimTime runEnd);

} // namespace manet

#endif
