#include "manet/aodv.h"

#include <algorithm>

namespace manet::aodv
{

const RouteEntry*
RoutingTable::Find(NodeId dest) const
{
    auto it = m_entries.find(dest);
    return it == m_entries.end() ? nullptr : &it->second;
}

RouteEntry*
RoutingTable::Find(NodeId dest)
{
    auto it = m_entries.find(dest);
    return it == m_entries.end() ? nullptr : &it->second;
}

OfferResult
RoutingTable::Offer(NodeId dest, uint32_t seq, NodeId via, uint32_t neighborHops, SimTime expiresAt)
{
    const uint32_t hops = neighborHops + 1;
    auto [it, created] = m_entries.try_emplace(dest);
    RouteEntry& e = it->second;

    auto reset = [&] {
        e.dest = dest;
        e.destSeq = seq;
        e.seqValid = true;
        e.paths = {RoutePath{via, hops}};
        e.advertisedHops = hops;
        e.expiresAt = expiresAt;
        e.valid = true;
        return OfferResult::Installed;
    };
    auto revalidate = [&] {
        e.valid = true;
        e.expiresAt = std::max(e.expiresAt, expiresAt);
    };

    if (created || seq > e.destSeq || (seq == e.destSeq && e.Broken()))
    {
        return reset();
    }
    if (seq < e.destSeq)
    {
        return OfferResult::Rejected;
    }

    auto same = std::find_if(e.paths.begin(), e.paths.end(), [&](const RoutePath& p) {
        return p.nextHop == via;
    });

    if (!m_multipath)
    {
        if (hops < e.paths.front().hops)
        {
            e.paths.front() = RoutePath{via, hops};
            e.advertisedHops = hops;
            revalidate();
            return OfferResult::Installed;
        }
        if (same != e.paths.end() && hops == same->hops)
        {
            revalidate();
            return OfferResult::Refreshed;
        }
        return OfferResult::Rejected;
    }

    if (same != e.paths.end())
    {
        revalidate();
        return OfferResult::Refreshed;
    }
    // Loop-freedom rule for alternates: the advertiser must be strictly
    // closer than what we advertise for this sequence number.
    if (neighborHops < e.advertisedHops)
    {
        e.paths.push_back(RoutePath{via, hops});
        revalidate();
        return OfferResult::AddedAlternate;
    }
    return OfferResult::Rejected;
}

namespace
{

void
MarkBroken(RouteEntry& e, uint32_t seq)
{
    e.paths.clear();
    e.destSeq = seq;
    e.valid = false;
    e.advertisedHops = kInfiniteHops;
}

} // namespace

std::vector<Invalidated>
RoutingTable::RemoveNextHop(NodeId neighbor, SimTime now)
{
    std::vector<Invalidated> out;
    for (auto& [dest, e] : m_entries)
    {
        e.precursors.erase(neighbor);
        auto it = std::find_if(e.paths.begin(), e.paths.end(), [&](const RoutePath& p) {
            return p.nextHop == neighbor;
        });
        if (it == e.paths.end())
        {
            continue;
        }
        bool wasUsable = e.Usable(now);
        e.paths.erase(it);
        if (e.paths.empty())
        {
            MarkBroken(e, e.destSeq + 1);
            out.push_back({dest, e.destSeq, e.precursors, wasUsable});
        }
    }
    return out;
}

std::optional<Invalidated>
RoutingTable::RemovePath(NodeId dest, NodeId neighbor, uint32_t seq, SimTime now)
{
    RouteEntry* e = Find(dest);
    if (e == nullptr)
    {
        return std::nullopt;
    }
    auto it = std::find_if(e->paths.begin(), e->paths.end(), [&](const RoutePath& p) {
        return p.nextHop == neighbor;
    });
    if (it == e->paths.end())
    {
        return std::nullopt;
    }
    bool wasUsable = e->Usable(now);
    e->paths.erase(it);
    if (!e->paths.empty())
    {
        return std::nullopt;
    }
    MarkBroken(*e, std::max(e->destSeq, seq));
    return Invalidated{dest, e->destSeq, e->precursors, wasUsable};
}

void
RoutingTable::Break(NodeId dest)
{
    if (RouteEntry* e = Find(dest); e != nullptr && !e->Broken())
    {
        MarkBroken(*e, e->destSeq + 1);
    }
}

size_t
RoutingTable::Expire(SimTime now)
{
    size_t n = 0;
    for (auto& [dest, e] : m_entries)
    {
        if (e.valid && now > e.expiresAt)
        {
            e.valid = false;
            ++n;
        }
    }
    return n;
}

void
RoutingTable::Refresh(NodeId dest, SimTime until)
{
    if (RouteEntry* e = Find(dest); e != nullptr && e->valid && !e->Broken())
    {
        e->expiresAt = std::max(e->expiresAt, until);
    }
}

Agent::Agent(NodeId self, Network& network, Config config)
    : m_self(self),
      m_network(network),
      m_config(config),
      m_table(config.multipath)
{
}

size_t
Agent::Buffered(NodeId dest) const
{
    auto it = m_buffer.find(dest);
    return it == m_buffer.end() ? 0 : it->second.size();
}

std::vector<NodeId>
Agent::NextHops(NodeId dest) const
{
    const RouteEntry* e = m_table.Find(dest);
    if (dest == m_self || e == nullptr || !e->Usable(m_network.Now()))
    {
        return {};
    }
    if (!m_config.multipath)
    {
        return {e->paths.front().nextHop};
    }
    std::vector<NodeId> hops;
    for (const auto& p : e->paths)
    {
        hops.push_back(p.nextHop);
    }
    return hops;
}

std::optional<uint32_t>
Agent::HopCount(NodeId dest) const
{
    const RouteEntry* e = m_table.Find(dest);
    if (e == nullptr || !e->Usable(m_network.Now()))
    {
        return std::nullopt;
    }
    return e->HopCount();
}

uint32_t
Agent::AdvertisedHops(NodeId dest, uint32_t seq, uint32_t fallback) const
{
    const RouteEntry* e = m_table.Find(dest);
    if (e != nullptr && !e->Broken() && e->destSeq == seq)
    {
        return m_config.multipath ? e->advertisedHops : e->HopCount();
    }
    return fallback;
}

void
Agent::SendData(Packet packet)
{
    SimTime now = m_network.Now();
    m_table.Expire(now);
    NodeId dest = std::get<DataPacket>(packet.body).dst;
    RouteEntry* e = m_table.Find(dest);
    if (e != nullptr && e->Usable(now))
    {
        SendOnRoute(*e, std::move(packet), true);
        return;
    }
    Enqueue(dest, std::move(packet));
    if (!m_discoveries.count(dest))
    {
        StartDiscovery(dest);
    }
}

void
Agent::SendOnRoute(RouteEntry& entry, Packet packet, bool originated)
{
    SimTime until = m_network.Now() + m_config.activeRouteTimeout;
    entry.expiresAt = std::max(entry.expiresAt, until);
    const auto& data = std::get<DataPacket>(packet.body);
    if (!originated)
    {
        m_table.Refresh(data.src, until);
    }
    NodeId next = entry.paths.front().nextHop;
    m_network.Unicast(m_self,
                      next,
                      std::move(packet),
                      originated ? std::nullopt : std::optional{TraceAction::Forward});
}

void
Agent::Enqueue(NodeId dest, Packet packet)
{
    auto& queue = m_buffer[dest];
    if (queue.size() >= m_config.bufferCapacity)
    {
        m_network.Drop(m_self, queue.front(), DropReason::BufferOverflow);
        queue.pop_front();
    }
    queue.push_back(std::move(packet));
}

void
Agent::StartDiscovery(NodeId dest)
{
    m_discoveries[dest] = Discovery{};
    SendRreq(dest);
}

void
Agent::SendRreq(NodeId dest)
{
    ++m_ownSeq;
    ++m_rreqId;
    m_seenRreq.insert({m_self, m_rreqId});

    Rreq rreq{m_self, m_ownSeq, m_rreqId, dest, std::nullopt, 0,
              static_cast<uint32_t>(m_network.NodeCount())};
    if (const RouteEntry* e = m_table.Find(dest); e != nullptr && e->seqValid)
    {
        rreq.destSeqKnown = e->destSeq;
    }
    m_network.Broadcast(m_self, Packet{m_network.NextPacketId(), kRreqSize, rreq}, TraceAction::Send);
    m_discoveries[dest].timer = m_network.Engine().ScheduleIn(
        m_config.discoveryWait,
        EventKind::TimerExpiry,
        static_cast<int32_t>(m_self),
        [this, dest] { OnDiscoveryTimeout(dest); });
}

void
Agent::OnDiscoveryTimeout(NodeId dest)
{
    auto it = m_discoveries.find(dest);
    if (it == m_discoveries.end())
    {
        return;
    }
    const RouteEntry* e = m_table.Find(dest);
    if (e != nullptr && e->Usable(m_network.Now()))
    {
        FlushBuffer(dest);
        return;
    }
    if (it->second.attempts < m_config.rreqRetries)
    {
        ++it->second.attempts;
        SendRreq(dest);
        return;
    }
    m_discoveries.erase(it);
    auto queue = std::move(m_buffer[dest]);
    m_buffer.erase(dest);
    for (const auto& p : queue)
    {
        m_network.Drop(m_self, p, DropReason::NoRoute);
    }
}

void
Agent::FlushBuffer(NodeId dest)
{
    if (auto it = m_discoveries.find(dest); it != m_discoveries.end())
    {
        m_network.Engine().Cancel(it->second.timer);
        m_discoveries.erase(it);
    }
    auto queue = std::move(m_buffer[dest]);
    m_buffer.erase(dest);
    for (auto& p : queue)
    {
        RouteEntry* e = m_table.Find(dest);
        if (e != nullptr && e->Usable(m_network.Now()))
        {
            SendOnRoute(*e, std::move(p), true);
        }
        else
        {
            m_network.Drop(m_self, p, DropReason::NoRoute);
        }
    }
}

void
Agent::Receive(Packet packet, NodeId from)
{
    m_table.Expire(m_network.Now());
    if (const auto* rreq = std::get_if<Rreq>(&packet.body))
    {
        HandleRreq(packet, *rreq, from);
    }
    else if (const auto* rrep = std::get_if<Rrep>(&packet.body))
    {
        HandleRrep(packet, *rrep, from);
    }
    else if (const auto* rerr = std::get_if<Rerr>(&packet.body))
    {
        HandleRerr(*rerr, from);
    }
    else if (packet.IsData())
    {
        HandleData(std::move(packet), from);
    }
}

void
Agent::HandleRreq(const Packet& packet, const Rreq& rreq, NodeId from)
{
    if (rreq.origin == m_self)
    {
        return;
    }
    SimTime now = m_network.Now();
    auto key = std::pair{rreq.origin, rreq.rreqId};
    bool first = m_seenRreq.insert(key).second;
    if (!first && !m_config.multipath)
    {
        return;
    }

    OfferResult reverse =
        m_table.Offer(rreq.origin, rreq.originSeq, from, rreq.hopCount, now + m_config.activeRouteTimeout);

    if (rreq.dest == m_self)
    {
        ReplyState& reply = m_replies[key];
        if (first)
        {
            m_ownSeq = std::max(m_ownSeq, rreq.destSeqKnown.value_or(0)) + 1;
            reply.seq = m_ownSeq;
        }
        bool newPath = reverse == OfferResult::Installed || reverse == OfferResult::AddedAlternate;
        if ((first || newPath) && reply.repliedVia.insert(from).second)
        {
            Rrep rrep{m_self, reply.seq, 0, rreq.origin, m_config.activeRouteTimeout};
            m_network.Unicast(m_self,
                              from,
                              Packet{m_network.NextPacketId(), kRrepSize, rrep},
                              TraceAction::Send);
        }
        return;
    }
    if (!first)
    {
        return;
    }

    if (m_config.intermediateRrep)
    {
        RouteEntry* e = m_table.Find(rreq.dest);
        if (e != nullptr && e->Usable(now) && e->seqValid &&
            (!rreq.destSeqKnown || e->destSeq >= *rreq.destSeqKnown))
        {
            uint32_t hops = m_config.multipath ? e->advertisedHops : e->HopCount();
            Rrep rrep{rreq.dest, e->destSeq, hops, rreq.origin, e->expiresAt - now};
            e->precursors.insert(from);
            m_network.Unicast(m_self,
                              from,
                              Packet{m_network.NextPacketId(), kRrepSize, rrep},
                              TraceAction::Send);
            return;
        }
    }

    if (rreq.ttl <= 1)
    {
        m_network.Drop(m_self, packet, DropReason::Ttl);
        return;
    }
    Rreq fwd = rreq;
    fwd.ttl -= 1;
    fwd.hopCount = AdvertisedHops(rreq.origin, rreq.originSeq, rreq.hopCount + 1);
    m_network.Broadcast(m_self, Packet{packet.id, packet.size, fwd}, TraceAction::Forward);
}

void
Agent::HandleRrep(const Packet& packet, const Rrep& rrep, NodeId from)
{
    SimTime now = m_network.Now();
    m_table.Offer(rrep.dest, rrep.destSeq, from, rrep.hopCount, now + rrep.lifetime);

    if (rrep.origin == m_self)
    {
        const RouteEntry* e = m_table.Find(rrep.dest);
        if (e != nullptr && e->Usable(now) &&
            (m_discoveries.count(rrep.dest) || Buffered(rrep.dest) > 0))
        {
            FlushBuffer(rrep.dest);
        }
        return;
    }

    RouteEntry* reverse = m_table.Find(rrep.origin);
    if (reverse == nullptr || !reverse->Usable(now))
    {
        m_network.Drop(m_self, packet, DropReason::NoRoute);
        return;
    }
    NodeId next = reverse->paths.front().nextHop;
    reverse->precursors.insert(from);
    if (RouteEntry* forward = m_table.Find(rrep.dest); forward != nullptr)
    {
        forward->precursors.insert(next);
    }
    Rrep fwd = rrep;
    fwd.hopCount = AdvertisedHops(rrep.dest, rrep.destSeq, rrep.hopCount + 1);
    m_network.Unicast(m_self, next, Packet{packet.id, packet.size, fwd}, TraceAction::Forward);
}

void
Agent::HandleRerr(const Rerr& rerr, NodeId from)
{
    std::vector<Invalidated> lost;
    for (const auto& u : rerr.unreachable)
    {
        if (auto inv = m_table.RemovePath(u.dest, from, u.destSeq, m_network.Now()))
        {
            lost.push_back(std::move(*inv));
        }
    }
    SendRerrs(lost, from);
    for (const auto& inv : lost)
    {
        RediscoverIfWaiting(inv.dest);
    }
}

void
Agent::HandleData(Packet packet, NodeId from)
{
    const auto& data = std::get<DataPacket>(packet.body);
    if (data.dst == m_self)
    {
        m_network.DeliverLocal(m_self, packet);
        return;
    }
    SimTime now = m_network.Now();
    RouteEntry* e = m_table.Find(data.dst);
    if (e != nullptr && e->Usable(now))
    {
        e->precursors.insert(from);
        SendOnRoute(*e, std::move(packet), false);
        return;
    }

    NodeId dest = data.dst;
    m_network.Drop(m_self, packet, DropReason::NoRoute);
    uint32_t seq = 0;
    if (e != nullptr)
    {
        m_table.Break(dest);
        seq = e->destSeq;
    }
    Rerr rerr{{Unreachable{dest, seq}}};
    m_network.Unicast(m_self,
                      from,
                      Packet{m_network.NextPacketId(), RerrSize(1), rerr},
                      TraceAction::Send);
}

void
Agent::OnLinkDown(NodeId neighbor)
{
    auto lost = m_table.RemoveNextHop(neighbor, m_network.Now());
    SendRerrs(lost, neighbor);
    for (const auto& inv : lost)
    {
        RediscoverIfWaiting(inv.dest);
    }
}

void
Agent::SendRerrs(const std::vector<Invalidated>& invalidated, std::optional<NodeId> skip)
{
    std::map<NodeId, std::vector<Unreachable>> perPrecursor;
    for (const auto& inv : invalidated)
    {
        if (!inv.wasUsable)
        {
            continue;
        }
        for (NodeId p : inv.precursors)
        {
            if (p != skip && p != m_self && m_network.IsLinkUp(m_self, p))
            {
                perPrecursor[p].push_back({inv.dest, inv.destSeq});
            }
        }
    }
    for (auto& [p, list] : perPrecursor)
    {
        uint32_t size = RerrSize(list.size());
        m_network.Unicast(m_self,
                          p,
                          Packet{m_network.NextPacketId(), size, Rerr{std::move(list)}},
                          TraceAction::Send);
    }
}

void
Agent::RediscoverIfWaiting(NodeId dest)
{
    if (Buffered(dest) > 0 && !m_discoveries.count(dest))
    {
        StartDiscovery(dest);
    }
}

} // namespace manet::aodv
