#ifndef MANET_TRACE_H
#define MANET_TRACE_H

#include "manet/mobility.h"
#include "manet/packet.h"
#include "manet/sim_time.h"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace manet
{

enum class TraceAction : char
{
    Send = 's',
    Receive = 'r',
    Drop = 'd',
    Forward = 'f',
};

enum class TraceLayer : uint8_t
{
    Agent,
    Router,
};

enum class DropReason : uint8_t
{
    NoRoute,
    Ttl,
    BufferOverflow,
    LinkDownInFlight,
    EndOfRun,
};

/// Trace code for a drop reason: NRTE, TTL, IFQ, CBK, END.
std::string_view DropCode(DropReason reason);
std::optional<DropReason> ParseDropCode(std::string_view code);
/// Human-readable name used in summaries: no-route, ttl, buffer-overflow, ...
std::string_view DropName(DropReason reason);

/**
 * One line of the trace file:
 *
 *     <action> <time> <node> <layer> <kind> <pkt_id> <size> <detail>
 *
 * e.g. `s 10.000000 4 AGT cbr 0 512 4>1`. Time always carries six fractional
 * digits; detail is a single whitespace-free token (a drop code, `src>dst`,
 * or `full`/`incr` for DSDV updates).
 */
struct TraceRecord
{
    TraceAction action{TraceAction::Send};
    SimTime time;
    NodeId node{0};
    TraceLayer layer{TraceLayer::Router};
    PacketKind kind{PacketKind::Cbr};
    uint64_t pktId{0};
    uint32_t size{0};
    std::string detail;

    bool operator==(const TraceRecord&) const = default;
};

class MalformedTraceLine : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// No trailing newline.
std::string WriteTrace(const TraceRecord& record);

/// Accepts exactly the format WriteTrace produces (trailing '\n' tolerated).
TraceRecord ReadTrace(std::string_view line);

/// Appends formatted records to an in-memory buffer.
class TraceWriter
{
  public:
    void Append(const TraceRecord& record);

    const std::string& Text() const
    {
        return m_text;
    }

    size_t LineCount() const
    {
        return m_lines;
    }

  private:
    std::string m_text;
    size_t m_lines{0};
};

} // namespace manet

#endif
