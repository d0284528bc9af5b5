#include "manet/network.h"

#include <stdexcept>

namespace manet
{

Network::Network(Simulator& engine,
                 size_t nodeCount,
                 NetConfig config,
                 uint64_t seed,
                 TraceWriter* trace,
                 RunAccounting& accounting)
    : m_engine(engine),
      m_config(config),
      m_trace(trace),
      m_accounting(accounting),
      m_protocols(nodeCount, nullptr),
      m_links(nodeCount * nodeCount)
{
    m_jitter.reserve(nodeCount);
    m_loss.reserve(nodeCount);
    for (size_t i = 0; i < nodeCount; ++i)
    {
        m_jitter.emplace_back(seed, "jitter/" + std::to_string(i));
        m_loss.emplace_back(seed, "loss/" + std::to_string(i));
    }
}

void
Network::Attach(NodeId node, RoutingProtocol* protocol)
{
    m_protocols.at(node) = protocol;
}

RoutingProtocol&
Network::Protocol(NodeId node) const
{
    auto* p = m_protocols.at(node);
    if (p == nullptr)
    {
        throw std::logic_error("no protocol attached to node " + std::to_string(node));
    }
    return *p;
}

size_t
Network::Index(NodeId a, NodeId b) const
{
    if (a > b)
    {
        std::swap(a, b);
    }
    return static_cast<size_t>(a) * m_protocols.size() + b;
}

bool
Network::IsLinkUp(NodeId a, NodeId b) const
{
    return a != b && m_links[Index(a, b)].up;
}

std::vector<NodeId>
Network::Neighbors(NodeId node) const
{
    std::vector<NodeId> out;
    for (NodeId other = 0; other < m_protocols.size(); ++other)
    {
        if (IsLinkUp(node, other))
        {
            out.push_back(other);
        }
    }
    return out;
}

void
Network::SetLinkState(NodeId a, NodeId b, bool up)
{
    if (a > b)
    {
        std::swap(a, b);
    }
    auto& link = m_links[Index(a, b)];
    if (link.up == up)
    {
        return;
    }
    link.up = up;
    if (!up)
    {
        ++link.epoch;
    }
    for (auto [self, other] : {std::pair{a, b}, std::pair{b, a}})
    {
        if (m_protocols[self] == nullptr)
        {
            continue;
        }
        if (up)
        {
            m_protocols[self]->OnLinkUp(other);
        }
        else
        {
            m_protocols[self]->OnLinkDown(other);
        }
    }
}

SimTime
Network::DrawDelay(NodeId from)
{
    SimTime delay = m_config.hopDelay;
    if (m_config.jitterMax.Micros() > 0)
    {
        delay += SimTime::FromSeconds(m_jitter[from].Uniform(0.0, m_config.jitterMax.Seconds()));
    }
    return delay;
}

std::string
Network::Detail(const Packet& packet, NodeId from, std::optional<NodeId> to)
{
    auto pair = [](NodeId x, NodeId y) { return std::to_string(x) + ">" + std::to_string(y); };
    struct
    {
        NodeId from;
        std::optional<NodeId> to;
        decltype(pair)& fmt;
        std::string operator()(const DataPacket& d) const { return fmt(d.src, d.dst); }
        std::string operator()(const dsdv::Update& u) const
        {
            return u.kind == dsdv::UpdateKind::Full ? "full" : "incr";
        }
        std::string operator()(const aodv::Rreq& r) const { return fmt(r.origin, r.dest); }
        std::string operator()(const aodv::Rrep& r) const { return fmt(r.dest, r.origin); }
        std::string operator()(const aodv::Rerr&) const
        {
            return to ? fmt(from, *to) : std::to_string(from) + ">*";
        }
    } visitor{from, to, pair};
    return std::visit(visitor, packet.body);
}

void
Network::Trace(TraceAction action,
               NodeId node,
               TraceLayer layer,
               const Packet& packet,
               std::string detail)
{
    if (m_trace == nullptr)
    {
        return;
    }
    m_trace->Append(
        {action, Now(), node, layer, packet.Kind(), packet.id, packet.size, std::move(detail)});
}

void
Network::Transmit(NodeId from, NodeId to, const Packet& packet, SimTime delay)
{
    if (m_transmitObserver)
    {
        m_transmitObserver(Now(), from, to, packet);
    }
    uint64_t epoch = m_links[Index(from, to)].epoch;
    bool lost = m_config.dropProb > 0.0 && m_loss[from].Bernoulli(m_config.dropProb);
    if (lost)
    {
        // Lost on the air: same fate as a link break in flight.
        epoch = ~uint64_t{0};
    }
    m_engine.ScheduleIn(delay,
                        EventKind::PacketDelivery,
                        static_cast<int32_t>(to),
                        [this, from, to, packet, epoch]() mutable {
                            Arrive(from, to, std::move(packet), epoch);
                        });
}

bool
Network::Unicast(NodeId from, NodeId to, Packet packet, std::optional<TraceAction> action)
{
    if (!IsLinkUp(from, to))
    {
        Drop(from, packet, DropReason::LinkDownInFlight);
        return false;
    }
    if (action)
    {
        Trace(*action, from, TraceLayer::Router, packet, Detail(packet, from, to));
    }
    if (!packet.IsData())
    {
        m_accounting.OnControlSent(packet.Kind());
    }
    Transmit(from, to, packet, DrawDelay(from));
    return true;
}

void
Network::Broadcast(NodeId from, Packet packet, TraceAction action)
{
    Trace(action, from, TraceLayer::Router, packet, Detail(packet, from, std::nullopt));
    if (!packet.IsData())
    {
        m_accounting.OnControlSent(packet.Kind());
    }
    SimTime delay = DrawDelay(from);
    for (NodeId to : Neighbors(from))
    {
        Transmit(from, to, packet, delay);
    }
}

void
Network::Arrive(NodeId from, NodeId to, Packet packet, uint64_t epoch)
{
    const auto& link = m_links[Index(from, to)];
    if (!link.up || link.epoch != epoch)
    {
        Drop(to, packet, DropReason::LinkDownInFlight);
        return;
    }
    if (auto* data = std::get_if<DataPacket>(&packet.body))
    {
        ++data->hopsTraversed;
        m_accounting.MoveTo(packet.id, to);
        if (data->hopsTraversed >= kMaxDataHops && data->dst != to)
        {
            Drop(to, packet, DropReason::Ttl);
            return;
        }
    }
    else
    {
        Trace(TraceAction::Receive, to, TraceLayer::Router, packet, Detail(packet, from, to));
    }
    m_protocols[to]->Receive(std::move(packet), from);
}

void
Network::DeliverLocal(NodeId at, const Packet& packet)
{
    const auto& data = std::get<DataPacket>(packet.body);
    Trace(TraceAction::Receive, at, TraceLayer::Agent, packet, Detail(packet, at, std::nullopt));
    m_accounting.OnDelivered(packet.id, Now(), data.hopsTraversed);
}

void
Network::Drop(NodeId at, const Packet& packet, DropReason reason)
{
    Trace(TraceAction::Drop, at, TraceLayer::Router, packet, std::string(DropCode(reason)));
    if (packet.IsData())
    {
        m_accounting.OnDropped(packet.id, reason);
    }
}

} // namespace manet
