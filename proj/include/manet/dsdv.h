#ifndef MANET_DSDV_H
#define MANET_DSDV_H

#include "manet/network.h"
#include "manet/packet.h"
#include "manet/rng.h"
#include "manet/simulator.h"

#include <map>
#include <optional>
#include <vector>

namespace manet::dsdv
{

struct Config
{
    SimTime periodicInterval = SimTime::FromSeconds(15.0);
    double settlingWeight{0.5};
    double settlingFactor{2.0};
};

struct RouteEntry
{
    NodeId dest{0};
    NodeId nextHop{0};
    uint32_t metric{0};
    uint32_t destSeq{0};
    SimTime installAt;
    bool advertised{false};
    std::optional<SimTime> settlingDue;

    bool Broken() const
    {
        return metric == kInfiniteMetric;
    }
};

/// Per-destination exponentially weighted average of observed settling time,
/// i.e. the delay between the first route heard for a sequence number and a
/// later, better one for the same sequence number.
class SettlingEstimator
{
  public:
    explicit SettlingEstimator(double weight = 0.5)
        : m_weight(weight)
    {
    }

    SimTime Estimate(NodeId dest) const;
    void Observe(NodeId dest, SimTime settlingDelay);

  private:
    double m_weight;
    std::map<NodeId, double> m_average; ///< seconds
};

/**
 * DSDV routing state of one node.
 *
 * Own sequence numbers are even; a broken route is marked by an odd sequence
 * number (stored + 1) with infinite metric. Fresher sequence numbers always
 * win; for equal sequence numbers the smaller metric wins.
 */
class RouteTable
{
  public:
    RouteTable(NodeId self, Config config);

    NodeId Self() const
    {
        return m_self;
    }

    uint32_t OwnSeq() const
    {
        return m_ownSeq;
    }

    const RouteEntry* Find(NodeId dest) const;

    const std::map<NodeId, RouteEntry>& Entries() const
    {
        return m_entries;
    }

    /// Next hop iff an entry with finite metric exists.
    std::optional<NodeId> Lookup(NodeId dest) const;

    /// Applies a neighbour's advertisement; returns the destinations whose
    /// entry changed. Stale or non-improving entries are ignored, as are
    /// entries about this node itself.
    std::vector<NodeId> HandleUpdate(NodeId from, const Update& update, SimTime now);

    /// Bumps the own sequence number by 2 and returns the full table. Every
    /// entry counts as advertised afterwards.
    Update PeriodicDump(SimTime now);

    /// Marks every finite route through `neighbor` broken (seq + 1, infinite
    /// metric); returns the affected destinations.
    std::vector<NodeId> OnLinkBreak(NodeId neighbor, SimTime now);

    /// Earliest time a pending change is due for advertisement.
    std::optional<SimTime> NextAdvertisementDue() const;

    /// Pending changes due at or before `now`, marked advertised.
    Update TakeIncremental(SimTime now);

    const SettlingEstimator& Settling() const
    {
        return m_settling;
    }

  private:
    void MarkChanged(RouteEntry& entry, SimTime due);

    NodeId m_self;
    Config m_config;
    uint32_t m_ownSeq{0};
    std::map<NodeId, RouteEntry> m_entries;
    std::map<NodeId, SimTime> m_firstHeard;
    SettlingEstimator m_settling;
};

class Agent : public RoutingProtocol
{
  public:
    Agent(NodeId self, Network& network, Config config, uint64_t seed);

    void Start() override;
    void SendData(Packet packet) override;
    void Receive(Packet packet, NodeId from) override;
    void OnLinkDown(NodeId neighbor) override;
    std::vector<NodeId> NextHops(NodeId dest) const override;
    std::optional<uint32_t> HopCount(NodeId dest) const override;

    const RouteTable& Table() const
    {
        return m_table;
    }

  private:
    void PeriodicDump();
    void ScheduleTrigger();
    void SendIncremental();
    void Forward(Packet packet, bool originated);

    NodeId m_self;
    Network& m_network;
    Config m_config;
    RouteTable m_table;
    RngStream m_rng;
    std::optional<EventHandle> m_trigger;
};

} // namespace manet::dsdv

#endif
