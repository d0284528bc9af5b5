#include "manet/dsdv.h"

#include <algorithm>

namespace manet::dsdv
{

SimTime
SettlingEstimator::Estimate(NodeId dest) const
{
    auto it = m_average.find(dest);
    return it == m_average.end() ? SimTime{} : SimTime::FromSeconds(it->second);
}

void
SettlingEstimator::Observe(NodeId dest, SimTime settlingDelay)
{
    double obs = std::max(0.0, settlingDelay.Seconds());
    auto [it, inserted] = m_average.emplace(dest, 0.0);
    it->second = m_weight * obs + (1.0 - m_weight) * it->second;
}

RouteTable::RouteTable(NodeId self, Config config)
    : m_self(self),
      m_config(config),
      m_settling(config.settlingWeight)
{
    m_entries[self] = RouteEntry{self, self, 0, m_ownSeq, SimTime{}, false, SimTime{}};
}

const RouteEntry*
RouteTable::Find(NodeId dest) const
{
    auto it = m_entries.find(dest);
    return it == m_entries.end() ? nullptr : &it->second;
}

std::optional<NodeId>
RouteTable::Lookup(NodeId dest) const
{
    const RouteEntry* e = Find(dest);
    if (e == nullptr || e->Broken())
    {
        return std::nullopt;
    }
    return e->nextHop;
}

void
RouteTable::MarkChanged(RouteEntry& entry, SimTime due)
{
    entry.advertised = false;
    entry.settlingDue = due;
}

std::vector<NodeId>
RouteTable::HandleUpdate(NodeId from, const Update& update, SimTime now)
{
    std::vector<NodeId> changed;
    for (const auto& adv : update.entries)
    {
        if (adv.dest == m_self)
        {
            continue;
        }
        uint32_t candidate = adv.metric == kInfiniteMetric ? kInfiniteMetric : adv.metric + 1;
        auto it = m_entries.find(adv.dest);

        if (it == m_entries.end() || adv.destSeq > it->second.destSeq)
        {
            std::optional<uint32_t> previous;
            if (it != m_entries.end() && !it->second.Broken())
            {
                previous = it->second.metric;
            }
            RouteEntry& e = m_entries[adv.dest];
            e = RouteEntry{adv.dest, from, candidate, adv.destSeq, now, false, now};
            m_firstHeard[adv.dest] = now;

            SimTime due = now;
            if (candidate != kInfiniteMetric && previous && candidate > *previous)
            {
                // A shorter route for this sequence number may still be on its way.
                double delay =
                    m_config.settlingFactor * m_settling.Estimate(adv.dest).Seconds();
                due = now + SimTime::FromSeconds(delay);
            }
            MarkChanged(e, due);
            changed.push_back(adv.dest);
        }
        else if (adv.destSeq == it->second.destSeq && candidate < it->second.metric)
        {
            RouteEntry& e = it->second;
            if (!e.Broken())
            {
                m_settling.Observe(adv.dest, now - m_firstHeard[adv.dest]);
            }
            e.nextHop = from;
            e.metric = candidate;
            e.installAt = now;
            MarkChanged(e, now);
            changed.push_back(adv.dest);
        }
    }
    return changed;
}

Update
RouteTable::PeriodicDump(SimTime now)
{
    m_ownSeq += 2;
    RouteEntry& self = m_entries[m_self];
    self.destSeq = m_ownSeq;
    self.installAt = now;

    Update dump{m_self, UpdateKind::Full, {}};
    dump.entries.reserve(m_entries.size());
    for (auto& [dest, e] : m_entries)
    {
        dump.entries.push_back({dest, e.metric, e.destSeq});
        e.advertised = true;
        e.settlingDue.reset();
    }
    return dump;
}

std::vector<NodeId>
RouteTable::OnLinkBreak(NodeId neighbor, SimTime now)
{
    std::vector<NodeId> broken;
    for (auto& [dest, e] : m_entries)
    {
        if (dest == m_self || e.nextHop != neighbor || e.Broken())
        {
            continue;
        }
        e.metric = kInfiniteMetric;
        e.destSeq += 1;
        e.installAt = now;
        MarkChanged(e, now);
        broken.push_back(dest);
    }
    return broken;
}

std::optional<SimTime>
RouteTable::NextAdvertisementDue() const
{
    std::optional<SimTime> due;
    for (const auto& [dest, e] : m_entries)
    {
        if (!e.advertised && e.settlingDue && (!due || *e.settlingDue < *due))
        {
            due = e.settlingDue;
        }
    }
    return due;
}

Update
RouteTable::TakeIncremental(SimTime now)
{
    Update inc{m_self, UpdateKind::Incremental, {}};
    for (auto& [dest, e] : m_entries)
    {
        if (!e.advertised && e.settlingDue && *e.settlingDue <= now)
        {
            inc.entries.push_back({dest, e.metric, e.destSeq});
            e.advertised = true;
            e.settlingDue.reset();
        }
    }
    return inc;
}

Agent::Agent(NodeId self, Network& network, Config config, uint64_t seed)
    : m_self(self),
      m_network(network),
      m_config(config),
      m_table(self, config),
      m_rng(seed, "dsdv/" + std::to_string(self))
{
}

void
Agent::Start()
{
    double window = std::min(1.0, m_config.periodicInterval.Seconds());
    SimTime offset = SimTime::FromSeconds(m_rng.Uniform(0.0, window));
    m_network.Engine().ScheduleIn(offset,
                                  EventKind::TimerExpiry,
                                  static_cast<int32_t>(m_self),
                                  [this] { PeriodicDump(); });
}

void
Agent::PeriodicDump()
{
    Update dump = m_table.PeriodicDump(m_network.Now());
    Packet packet{m_network.NextPacketId(), DsdvUpdateSize(dump.entries.size()), std::move(dump)};
    m_network.Broadcast(m_self, std::move(packet), TraceAction::Send);
    m_network.Engine().ScheduleIn(m_config.periodicInterval,
                                  EventKind::TimerExpiry,
                                  static_cast<int32_t>(m_self),
                                  [this] { PeriodicDump(); });
    ScheduleTrigger();
}

void
Agent::ScheduleTrigger()
{
    auto due = m_table.NextAdvertisementDue();
    if (!due)
    {
        if (m_trigger)
        {
            m_network.Engine().Cancel(*m_trigger);
            m_trigger.reset();
        }
        return;
    }
    SimTime at = std::max(*due, m_network.Now());
    if (m_trigger && m_network.Engine().IsPending(*m_trigger))
    {
        if (m_trigger->fireAt <= at)
        {
            return;
        }
        m_network.Engine().Cancel(*m_trigger);
    }
    m_trigger = m_network.Engine().Schedule(at,
                                            EventKind::TimerExpiry,
                                            static_cast<int32_t>(m_self),
                                            [this] {
                                                m_trigger.reset();
                                                SendIncremental();
                                                ScheduleTrigger();
                                            });
}

void
Agent::SendIncremental()
{
    Update inc = m_table.TakeIncremental(m_network.Now());
    if (inc.entries.empty())
    {
        return;
    }
    Packet packet{m_network.NextPacketId(), DsdvUpdateSize(inc.entries.size()), std::move(inc)};
    m_network.Broadcast(m_self, std::move(packet), TraceAction::Send);
}

void
Agent::SendData(Packet packet)
{
    Forward(std::move(packet), true);
}

void
Agent::Receive(Packet packet, NodeId from)
{
    if (auto* update = std::get_if<Update>(&packet.body))
    {
        auto changed = m_table.HandleUpdate(from, *update, m_network.Now());
        if (!changed.empty())
        {
            ScheduleTrigger();
        }
        return;
    }
    if (packet.IsData())
    {
        if (std::get<DataPacket>(packet.body).dst == m_self)
        {
            m_network.DeliverLocal(m_self, packet);
            return;
        }
        Forward(std::move(packet), false);
    }
}

void
Agent::Forward(Packet packet, bool originated)
{
    const auto& data = std::get<DataPacket>(packet.body);
    auto next = m_table.Lookup(data.dst);
    if (!next)
    {
        // Proactive routing does not buffer.
        m_network.Drop(m_self, packet, DropReason::NoRoute);
        return;
    }
    m_network.Unicast(m_self,
                      *next,
                      std::move(packet),
                      originated ? std::nullopt : std::optional{TraceAction::Forward});
}

void
Agent::OnLinkDown(NodeId neighbor)
{
    auto broken = m_table.OnLinkBreak(neighbor, m_network.Now());
    if (broken.empty())
    {
        return;
    }
    SendIncremental();
    ScheduleTrigger();
}

std::vector<NodeId>
Agent::NextHops(NodeId dest) const
{
    if (dest == m_self)
    {
        return {};
    }
    auto next = m_table.Lookup(dest);
    return next ? std::vector<NodeId>{*next} : std::vector<NodeId>{};
}

std::optional<uint32_t>
Agent::HopCount(NodeId dest) const
{
    const RouteEntry* e = m_table.Find(dest);
    if (e == nullptr || e->Broken())
    {
        return std::nullopt;
    }
    return e->metric;
}

} // namespace manet::dsdv
