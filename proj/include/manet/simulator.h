#ifndef MANET_SIMULATOR_H
#define MANET_SIMULATOR_H

#include "manet/sim_time.h"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace manet
{

enum class EventKind : uint8_t
{
    PacketDelivery,
    TimerExpiry,
    LinkChange,
    TrafficEmit,
    MobilityCheckpoint,
};

std::string_view ToString(EventKind kind);

/// Target of an event: a node id, or kEngineTarget for engine-internal work.
inline constexpr int32_t kEngineTarget = -1;

struct EventHandle
{
    SimTime fireAt;
    uint64_t seq{0};
};

struct DispatchRecord
{
    SimTime fireAt;
    uint64_t seq;
    EventKind kind;
    int32_t target;

    bool operator==(const DispatchRecord&) const = default;
};

class SchedulingInPast : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/**
 * Single-threaded discrete-event engine.
 *
 * Pending events are totally ordered by (fire time, insertion sequence), so
 * events scheduled for the same instant run in the order they were scheduled.
 */
class Simulator
{
  public:
    using Callback = std::function<void()>;
    using DispatchObserver = std::function<void(const DispatchRecord&)>;

    SimTime Now() const
    {
        return m_now;
    }

    /// Throws SchedulingInPast if at < Now().
    EventHandle Schedule(SimTime at, EventKind kind, int32_t target, Callback fn);

    EventHandle ScheduleIn(SimTime delay, EventKind kind, int32_t target, Callback fn)
    {
        return Schedule(m_now + delay, kind, target, std::move(fn));
    }

    /// False if the event already fired or was cancelled.
    bool Cancel(const EventHandle& handle);

    bool IsPending(const EventHandle& handle) const;

    /// Dispatches every event with fire time <= end, then sets the clock to end.
    uint64_t RunUntil(SimTime end);

    size_t PendingCount() const
    {
        return m_pending.size();
    }

    /// Called after each dispatched event has run.
    void SetDispatchObserver(DispatchObserver observer)
    {
        m_observer = std::move(observer);
    }

  private:
    struct Pending
    {
        EventKind kind;
        int32_t target;
        Callback fn;
    };

    using Key = std::pair<int64_t, uint64_t>;

    SimTime m_now;
    uint64_t m_nextSeq{0};
    std::map<Key, Pending> m_pending;
    DispatchObserver m_observer;
};

} // namespace manet

#endif
