#include "manet/simulator.h"

namespace manet
{

std::string_view
ToString(EventKind kind)
{
    switch (kind)
    {
    case EventKind::PacketDelivery:
        return "packet-delivery";
    case EventKind::TimerExpiry:
        return "timer-expiry";
    case EventKind::LinkChange:
        return "link-change";
    case EventKind::TrafficEmit:
        return "traffic-emit";
    case EventKind::MobilityCheckpoint:
        return "mobility-checkpoint";
    }
    return "unknown";
}

EventHandle
Simulator::Schedule(SimTime at, EventKind kind, int32_t target, Callback fn)
{
    if (at < m_now)
    {
        throw SchedulingInPast("event at " + at.ToString() + " is before clock " +
                               m_now.ToString());
    }
    EventHandle handle{at, m_nextSeq++};
    m_pending.emplace(Key{at.Micros(), handle.seq}, Pending{kind, target, std::move(fn)});
    return handle;
}

bool
Simulator::Cancel(const EventHandle& handle)
{
    return m_pending.erase(Key{handle.fireAt.Micros(), handle.seq}) > 0;
}

bool
Simulator::IsPending(const EventHandle& handle) const
{
    return m_pending.count(Key{handle.fireAt.Micros(), handle.seq}) > 0;
}

uint64_t
Simulator::RunUntil(SimTime end)
{
    uint64_t dispatched = 0;
    while (!m_pending.empty() && m_pending.begin()->first.first <= end.Micros())
    {
        auto it = m_pending.begin();
        DispatchRecord record{SimTime::FromMicros(it->first.first),
                              it->first.second,
                              it->second.kind,
                              it->second.target};
        Callback fn = std::move(it->second.fn);
        m_pending.erase(it);
        m_now = record.fireAt;
        if (fn)
        {
            fn();
        }
        ++dispatched;
        if (m_observer)
        {
            m_observer(record);
        }
    }
    if (end > m_now)
    {
        m_now = end;
    }
    return dispatched;
}

} // namespace manet
