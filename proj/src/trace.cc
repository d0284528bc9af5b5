#include "manet/trace.h"

#include <charconv>
#include <vector>

namespace manet
{

namespace
{

template <typename T>
T
ParseUnsigned(std::string_view field, const char* what)
{
    T value{};
    if (field.empty() || (field.size() > 1 && field[0] == '0'))
    {
        throw MalformedTraceLine(std::string("bad ") + what + " field '" + std::string(field) +
                                 "'");
    }
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
    {
        throw MalformedTraceLine(std::string("bad ") + what + " field '" + std::string(field) +
                                 "'");
    }
    return value;
}

SimTime
ParseTime(std::string_view field)
{
    auto dot = field.find('.');
    if (dot == std::string_view::npos || field.size() - dot - 1 != 6)
    {
        throw MalformedTraceLine("time must have exactly six fractional digits: '" +
                                 std::string(field) + "'");
    }
    auto whole = ParseUnsigned<int64_t>(field.substr(0, dot), "time");
    auto fracText = field.substr(dot + 1);
    int64_t frac = 0;
    for (char c : fracText)
    {
        if (c < '0' || c > '9')
        {
            throw MalformedTraceLine("bad time field '" + std::string(field) + "'");
        }
        frac = frac * 10 + (c - '0');
    }
    return SimTime::FromMicros(whole * 1000000 + frac);
}

} // namespace

std::string_view
DropCode(DropReason reason)
{
    switch (reason)
    {
    case DropReason::NoRoute:
        return "NRTE";
    case DropReason::Ttl:
        return "TTL";
    case DropReason::BufferOverflow:
        return "IFQ";
    case DropReason::LinkDownInFlight:
        return "CBK";
    case DropReason::EndOfRun:
        return "END";
    }
    return "?";
}

std::string_view
DropName(DropReason reason)
{
    switch (reason)
    {
    case DropReason::NoRoute:
        return "no-route";
    case DropReason::Ttl:
        return "ttl";
    case DropReason::BufferOverflow:
        return "buffer-overflow";
    case DropReason::LinkDownInFlight:
        return "link-down-in-flight";
    case DropReason::EndOfRun:
        return "end-of-run";
    }
    return "?";
}

std::optional<DropReason>
ParseDropCode(std::string_view code)
{
    for (auto r : {DropReason::NoRoute,
                   DropReason::Ttl,
                   DropReason::BufferOverflow,
                   DropReason::LinkDownInFlight,
                   DropReason::EndOfRun})
    {
        if (DropCode(r) == code)
        {
            return r;
        }
    }
    return std::nullopt;
}

std::string
WriteTrace(const TraceRecord& r)
{
    std::string line;
    line.reserve(48 + r.detail.size());
    line += static_cast<char>(r.action);
    line += ' ';
    line += r.time.ToString();
    line += ' ';
    line += std::to_string(r.node);
    line += r.layer == TraceLayer::Agent ? " AGT " : " RTR ";
    line += ToString(r.kind);
    line += ' ';
    line += std::to_string(r.pktId);
    line += ' ';
    line += std::to_string(r.size);
    line += ' ';
    line += r.detail;
    return line;
}

TraceRecord
ReadTrace(std::string_view line)
{
    if (!line.empty() && line.back() == '\n')
    {
        line.remove_suffix(1);
    }
    std::vector<std::string_view> fields;
    size_t pos = 0;
    while (pos <= line.size())
    {
        auto next = line.find(' ', pos);
        if (next == std::string_view::npos)
        {
            next = line.size();
        }
        fields.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    if (fields.size() != 8)
    {
        throw MalformedTraceLine("expected 8 space-separated fields, got " +
                                 std::to_string(fields.size()));
    }

    TraceRecord r;
    if (fields[0].size() != 1)
    {
        throw MalformedTraceLine("bad action '" + std::string(fields[0]) + "'");
    }
    switch (fields[0][0])
    {
    case 's':
    case 'r':
    case 'd':
    case 'f':
        r.action = static_cast<TraceAction>(fields[0][0]);
        break;
    default:
        throw MalformedTraceLine("bad action '" + std::string(fields[0]) + "'");
    }
    r.time = ParseTime(fields[1]);
    r.node = ParseUnsigned<NodeId>(fields[2], "node");
    if (fields[3] == "AGT")
    {
        r.layer = TraceLayer::Agent;
    }
    else if (fields[3] == "RTR")
    {
        r.layer = TraceLayer::Router;
    }
    else
    {
        throw MalformedTraceLine("bad layer '" + std::string(fields[3]) + "'");
    }
    auto kind = ParsePacketKind(fields[4]);
    if (!kind)
    {
        throw MalformedTraceLine("bad packet kind '" + std::string(fields[4]) + "'");
    }
    r.kind = *kind;
    r.pktId = ParseUnsigned<uint64_t>(fields[5], "packet id");
    r.size = ParseUnsigned<uint32_t>(fields[6], "size");
    if (fields[7].empty() || fields[7].find_first_of("\t\r\n") != std::string_view::npos)
    {
        throw MalformedTraceLine("empty or malformed detail field");
    }
    r.detail = std::string(fields[7]);
    return r;
}

void
TraceWriter::Append(const TraceRecord& record)
{
    m_text += WriteTrace(record);
    m_text += '\n';
    ++m_lines;
}

} // namespace manet
