#ifndef MANET_NETWORK_H
#define MANET_NETWORK_H

#include "manet/mobility.h"
#include "manet/packet.h"
#include "manet/rng.h"
#include "manet/simulator.h"
#include "manet/trace.h"
#include "manet/traffic.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace manet
{

struct NetConfig
{
    SimTime hopDelay = SimTime::FromMicros(1000);
    SimTime jitterMax = SimTime::FromMicros(500);
    double dropProb{0.0};
};

/// Data packets that have traversed this many hops are dropped with TTL.
inline constexpr uint32_t kMaxDataHops = 64;

class RoutingProtocol;

/**
 * The shared radio medium: symmetric link state driven by connectivity
 * events, lossless delayed delivery to in-range neighbours, tracing and
 * packet accounting.
 *
 * A frame is delivered iff the link is up when it is sent and does not go
 * down before it arrives.
 */
class Network
{
  public:
    using TransmitObserver =
        std::function<void(SimTime at, NodeId from, NodeId to, const Packet& packet)>;

    Network(Simulator& engine,
            size_t nodeCount,
            NetConfig config,
            uint64_t seed,
            TraceWriter* trace,
            RunAccounting& accounting);

    Simulator& Engine()
    {
        return m_engine;
    }

    SimTime Now() const
    {
        return m_engine.Now();
    }

    size_t NodeCount() const
    {
        return m_protocols.size();
    }

    void Attach(NodeId node, RoutingProtocol* protocol);
    RoutingProtocol& Protocol(NodeId node) const;

    uint64_t NextPacketId()
    {
        return m_nextPacketId++;
    }

    bool IsLinkUp(NodeId a, NodeId b) const;
    std::vector<NodeId> Neighbors(NodeId node) const;

    /// Updates the link and notifies both endpoints' protocols (lower id first).
    void SetLinkState(NodeId a, NodeId b, bool up);

    /// Sends to one neighbour. When `action` is set the sender logs an RTR
    /// record. Returns false (and drops the packet) if the link is down.
    bool Unicast(NodeId from, NodeId to, Packet packet, std::optional<TraceAction> action);

    /// Sends one frame heard by every current neighbour.
    void Broadcast(NodeId from, Packet packet, TraceAction action);

    /// A data packet reached its destination's agent.
    void DeliverLocal(NodeId at, const Packet& packet);

    void Drop(NodeId at, const Packet& packet, DropReason reason);

    void Trace(TraceAction action,
               NodeId node,
               TraceLayer layer,
               const Packet& packet,
               std::string detail);

    RunAccounting& Accounting()
    {
        return m_accounting;
    }

    void SetTransmitObserver(TransmitObserver observer)
    {
        m_transmitObserver = std::move(observer);
    }

    /// `src>dst` style detail token for a packet sent from -> to.
    static std::string Detail(const Packet& packet, NodeId from, std::optional<NodeId> to);

  private:
    struct LinkState
    {
        bool up{false};
        uint64_t epoch{0}; ///< bumped on every down transition
    };

    size_t Index(NodeId a, NodeId b) const;
    SimTime DrawDelay(NodeId from);
    void Transmit(NodeId from, NodeId to, const Packet& packet, SimTime delay);
    void Arrive(NodeId from, NodeId to, Packet packet, uint64_t epoch);

    Simulator& m_engine;
    NetConfig m_config;
    TraceWriter* m_trace;
    RunAccounting& m_accounting;
    std::vector<RoutingProtocol*> m_protocols;
    std::vector<LinkState> m_links;
    std::vector<RngStream> m_jitter;
    std::vector<RngStream> m_loss;
    uint64_t m_nextPacketId{0};
    TransmitObserver m_transmitObserver;
};

/**
 * Per-node routing agent. Implementations own their node's routing state and
 * are driven only by engine-dispatched events.
 */
class RoutingProtocol
{
  public:
    virtual ~RoutingProtocol() = default;

    /// Called once at t = 0 after initial links are up.
    virtual void Start()
    {
    }

    /// A data packet originated by this node's agent.
    virtual void SendData(Packet packet) = 0;

    /// A frame from a neighbour (data or control).
    virtual void Receive(Packet packet, NodeId from) = 0;

    virtual void OnLinkUp(NodeId /*neighbor*/)
    {
    }

    virtual void OnLinkDown(NodeId neighbor) = 0;

    /// Next hops this node would use toward dest right now; empty if none.
    /// Single-path protocols return at most one.
    virtual std::vector<NodeId> NextHops(NodeId dest) const = 0;

    /// Hop count of the route this node would use toward dest, if any.
    virtual std::optional<uint32_t> HopCount(NodeId dest) const = 0;
};

} // namespace manet

#endif
