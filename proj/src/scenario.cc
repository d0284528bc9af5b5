#include "manet/scenario.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace manet
{

namespace
{

enum class ParamType
{
    PositiveSeconds,
    NonNegativeSeconds,
    Fraction,
    NonNegativeReal,
    Count,
    PositiveCount,
    Bool,
};

const std::map<std::string, ParamType, std::less<>>&
ParamTable()
{
    static const std::map<std::string, ParamType, std::less<>> table{
        {"dsdv.periodic_interval", ParamType::PositiveSeconds},
        {"dsdv.settling_weight", ParamType::Fraction},
        {"dsdv.settling_factor", ParamType::NonNegativeReal},
        {"aodv.active_route_timeout", ParamType::PositiveSeconds},
        {"aodv.rreq_retries", ParamType::Count},
        {"aodv.discovery_wait", ParamType::PositiveSeconds},
        {"aodv.multipath", ParamType::Bool},
        {"aodv.intermediate_rrep", ParamType::Bool},
        {"aodv.buffer_capacity", ParamType::PositiveCount},
        {"net.hop_delay", ParamType::NonNegativeSeconds},
        {"net.jitter", ParamType::NonNegativeSeconds},
        {"net.drop_prob", ParamType::Fraction},
    };
    return table;
}

std::optional<double>
ToReal(std::string_view s)
{
    double v = 0.0;
    if (s.empty() || s.front() == '+')
    {
        return std::nullopt;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    {
        return std::nullopt;
    }
    return v;
}

std::optional<uint64_t>
ToUnsigned(std::string_view s)
{
    uint64_t v = 0;
    if (s.empty())
    {
        return std::nullopt;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
    {
        return std::nullopt;
    }
    return v;
}

/// Canonical text for a parameter value, or nullopt if out of domain.
std::optional<std::string>
CanonicalParam(ParamType type, std::string_view value)
{
    switch (type)
    {
    case ParamType::Bool:
        if (value == "true" || value == "false")
        {
            return std::string(value);
        }
        return std::nullopt;
    case ParamType::Count:
    case ParamType::PositiveCount: {
        auto v = ToUnsigned(value);
        if (!v || *v > 1'000'000 || (type == ParamType::PositiveCount && *v == 0))
        {
            return std::nullopt;
        }
        return std::to_string(*v);
    }
    default:
        break;
    }
    auto v = ToReal(value);
    if (!v)
    {
        return std::nullopt;
    }
    bool ok = false;
    switch (type)
    {
    case ParamType::PositiveSeconds:
        ok = *v > 0.0 && *v < 1e9;
        break;
    case ParamType::NonNegativeSeconds:
        ok = *v >= 0.0 && *v < 1e9;
        break;
    case ParamType::Fraction:
        ok = *v >= 0.0 && *v <= 1.0;
        break;
    case ParamType::NonNegativeReal:
        ok = *v >= 0.0 && *v < 1e9;
        break;
    default:
        break;
    }
    if (!ok)
    {
        return std::nullopt;
    }
    return std::string(value);
}

std::vector<std::string_view>
Tokenize(std::string_view line)
{
    if (auto hash = line.find('#'); hash != std::string_view::npos)
    {
        line = line.substr(0, hash);
    }
    std::vector<std::string_view> tokens;
    size_t i = 0;
    auto isSpace = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
    while (i < line.size())
    {
        while (i < line.size() && isSpace(line[i]))
        {
            ++i;
        }
        size_t start = i;
        while (i < line.size() && !isSpace(line[i]))
        {
            ++i;
        }
        if (i > start)
        {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

class Parser
{
  public:
    Scenario Run(std::string_view text)
    {
        size_t lineNo = 0;
        size_t pos = 0;
        while (pos <= text.size())
        {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos)
            {
                nl = text.size();
            }
            ++lineNo;
            Directive(Tokenize(text.substr(pos, nl - pos)), lineNo);
            pos = nl + 1;
        }
        return Finish();
    }

    void Directive(const std::vector<std::string_view>& t, size_t line)
    {
        m_line = line;
        if (t.empty())
        {
            return;
        }
        const auto& d = t[0];
        if (d == "protocol")
        {
            Arity(t, 2);
            Once("protocol");
            SetProtocol(t[1]);
        }
        else if (d == "duration")
        {
            Arity(t, 2);
            Once("duration");
            SetDuration(t[1]);
        }
        else if (d == "seed")
        {
            Arity(t, 2);
            Once("seed");
            SetSeed(t[1]);
        }
        else if (d == "range")
        {
            Arity(t, 2);
            Once("range");
            auto v = ToReal(t[1]);
            if (!v || *v <= 0.0)
            {
                Fail(ScenarioErrorKind::BadParameter, "range must be a positive number");
            }
            m_scenario.radioRange = *v;
        }
        else if (d == "node")
        {
            // node <id> at <x> <y>
            Arity(t, 5);
            Keyword(t[2], "at");
            NodeId id = Id(t[1]);
            if (m_nodeLines.count(id))
            {
                Fail(ScenarioErrorKind::DuplicateNode,
                     "node " + std::to_string(id) + " already declared on line " +
                         std::to_string(m_nodeLines[id]));
            }
            m_nodeLines[id] = line;
            m_nodes[id] = WaypointSchedule{id, {Real(t[3], "x"), Real(t[4], "y")}, {}};
        }
        else if (d == "move")
        {
            // move <id> from <t> to <x> <y> speed <v>
            Arity(t, 9);
            Keyword(t[2], "from");
            Keyword(t[4], "to");
            Keyword(t[7], "speed");
            NodeId id = Id(t[1]);
            double depart = Real(t[3], "departure time");
            double speed = Real(t[8], "speed");
            if (depart < 0.0)
            {
                Fail(ScenarioErrorKind::BadParameter, "departure time must be >= 0");
            }
            if (speed <= 0.0)
            {
                Fail(ScenarioErrorKind::BadParameter, "speed must be > 0");
            }
            m_moves.push_back(
                {id, line, WaypointLeg{SimTime::FromSeconds(depart), {Real(t[5], "x"), Real(t[6], "y")}, speed}});
        }
        else if (d == "flow")
        {
            // flow cbr from <src> to <dst> start <t> stop <t> rate <bps> size <bytes>
            Arity(t, 14);
            Keyword(t[1], "cbr");
            Keyword(t[2], "from");
            Keyword(t[4], "to");
            Keyword(t[6], "start");
            Keyword(t[8], "stop");
            Keyword(t[10], "rate");
            Keyword(t[12], "size");
            Flow f;
            f.flowId = static_cast<uint32_t>(m_scenario.flows.size());
            f.src = Id(t[3]);
            f.dst = Id(t[5]);
            double start = Real(t[7], "start");
            double stop = Real(t[9], "stop");
            f.rate = Real(t[11], "rate");
            auto size = ToUnsigned(t[13]);
            if (!size || *size == 0 || *size > 65535)
            {
                Fail(ScenarioErrorKind::BadParameter, "size must be an integer in [1, 65535]");
            }
            f.packetSize = static_cast<uint32_t>(*size);
            if (f.src == f.dst)
            {
                Fail(ScenarioErrorKind::BadParameter, "flow source and destination must differ");
            }
            if (start < 0.0 || !(start < stop))
            {
                Fail(ScenarioErrorKind::BadParameter, "flow needs 0 <= start < stop");
            }
            if (f.rate <= 0.0)
            {
                Fail(ScenarioErrorKind::BadParameter, "rate must be > 0");
            }
            f.startAt = SimTime::FromSeconds(start);
            f.stopAt = SimTime::FromSeconds(stop);
            if (EmissionInterval(f).Micros() <= 0)
            {
                Fail(ScenarioErrorKind::BadParameter, "rate too high for microsecond resolution");
            }
            m_flowLines.push_back(line);
            m_scenario.flows.push_back(f);
        }
        else if (d == "param")
        {
            Arity(t, 3);
            SetParam(t[1], t[2]);
        }
        else
        {
            Fail(ScenarioErrorKind::UnknownDirective,
                 "unknown directive '" + std::string(d) + "'");
        }
    }

    void SetProtocol(std::string_view v)
    {
        if (v == "aodv")
        {
            m_scenario.protocol = ProtocolKind::Aodv;
        }
        else if (v == "dsdv")
        {
            m_scenario.protocol = ProtocolKind::Dsdv;
        }
        else
        {
            Fail(ScenarioErrorKind::BadParameter, "protocol must be 'aodv' or 'dsdv'");
        }
    }

    void SetDuration(std::string_view v)
    {
        auto d = ToReal(v);
        if (!d || *d <= 0.0 || *d > 1e9)
        {
            Fail(ScenarioErrorKind::BadParameter, "duration must be > 0");
        }
        m_scenario.duration = SimTime::FromSeconds(*d);
        if (m_scenario.duration.Micros() <= 0)
        {
            Fail(ScenarioErrorKind::BadParameter, "duration must be > 0");
        }
    }

    void SetSeed(std::string_view v)
    {
        auto s = ToUnsigned(v);
        if (!s)
        {
            Fail(ScenarioErrorKind::BadParameter, "seed must be a 64-bit unsigned integer");
        }
        m_scenario.seed = *s;
    }

    void SetParam(std::string_view key, std::string_view value)
    {
        auto it = ParamTable().find(key);
        if (it == ParamTable().end())
        {
            Fail(ScenarioErrorKind::BadParameter, "unknown parameter '" + std::string(key) + "'");
        }
        auto canonical = CanonicalParam(it->second, value);
        if (!canonical)
        {
            Fail(ScenarioErrorKind::BadParameter,
                 "bad value '" + std::string(value) + "' for " + std::string(key));
        }
        m_scenario.params[std::string(key)] = *canonical;
    }

    Scenario Finish()
    {
        m_line = 0;
        if (!m_seen.count("protocol"))
        {
            Fail(ScenarioErrorKind::BadParameter, "missing 'protocol' directive");
        }
        if (!m_seen.count("duration"))
        {
            Fail(ScenarioErrorKind::BadParameter, "missing 'duration' directive");
        }
        if (!m_seen.count("range"))
        {
            Fail(ScenarioErrorKind::BadParameter, "missing 'range' directive");
        }
        if (m_nodes.empty())
        {
            Fail(ScenarioErrorKind::BadParameter, "scenario declares no nodes");
        }
        NodeId expected = 0;
        for (const auto& [id, s] : m_nodes)
        {
            if (id != expected)
            {
                m_line = m_nodeLines[id];
                Fail(ScenarioErrorKind::BadParameter,
                     "node ids must be dense from 0; node " + std::to_string(expected) +
                         " is missing");
            }
            ++expected;
        }
        for (const auto& mv : m_moves)
        {
            m_line = mv.line;
            auto it = m_nodes.find(mv.node);
            if (it == m_nodes.end())
            {
                Fail(ScenarioErrorKind::UndeclaredNode,
                     "move references undeclared node " + std::to_string(mv.node));
            }
            it->second.legs.push_back(mv.leg);
        }
        for (size_t i = 0; i < m_scenario.flows.size(); ++i)
        {
            m_line = m_flowLines[i];
            const auto& f = m_scenario.flows[i];
            for (NodeId n : {f.src, f.dst})
            {
                if (!m_nodes.count(n))
                {
                    Fail(ScenarioErrorKind::UndeclaredNode,
                         "flow references undeclared node " + std::to_string(n) + " (" +
                             std::to_string(m_nodes.size()) + " nodes declared)");
                }
            }
        }
        // Legs must be ordered and may not depart before the previous arrival.
        std::map<NodeId, std::pair<double, Position>> cursor;
        for (const auto& mv : m_moves)
        {
            m_line = mv.line;
            auto [it, fresh] = cursor.try_emplace(mv.node, 0.0, m_nodes[mv.node].initial);
            auto& [readyAt, here] = it->second;
            double depart = mv.leg.departAt.Seconds();
            if (depart < readyAt - 1e-9)
            {
                Fail(ScenarioErrorKind::BadParameter,
                     "leg departs at " + mv.leg.departAt.ToString() +
                         " before the previous leg arrives");
            }
            readyAt = depart + Distance(here, mv.leg.destination) / mv.leg.speed;
            here = mv.leg.destination;
        }
        for (auto& [id, s] : m_nodes)
        {
            m_scenario.nodes.push_back(std::move(s));
        }
        return std::move(m_scenario);
    }

  private:
    struct Move
    {
        NodeId node;
        size_t line;
        WaypointLeg leg;
    };

    [[noreturn]] void Fail(ScenarioErrorKind kind, const std::string& msg) const
    {
        throw ScenarioError(kind, m_line, msg);
    }

    void Arity(const std::vector<std::string_view>& t, size_t n) const
    {
        if (t.size() != n)
        {
            Fail(ScenarioErrorKind::SyntaxError,
                 "'" + std::string(t[0]) + "' expects " + std::to_string(n - 1) +
                     " arguments, got " + std::to_string(t.size() - 1));
        }
    }

    void Keyword(std::string_view got, std::string_view want) const
    {
        if (got != want)
        {
            Fail(ScenarioErrorKind::SyntaxError,
                 "expected '" + std::string(want) + "', got '" + std::string(got) + "'");
        }
    }

    void Once(const std::string& directive)
    {
        if (!m_seen.insert(directive).second)
        {
            Fail(ScenarioErrorKind::BadParameter, "duplicate '" + directive + "' directive");
        }
    }

    NodeId Id(std::string_view s) const
    {
        auto v = ToUnsigned(s);
        if (!v || *v > 65535)
        {
            Fail(ScenarioErrorKind::SyntaxError, "bad node id '" + std::string(s) + "'");
        }
        return static_cast<NodeId>(*v);
    }

    double Real(std::string_view s, const char* what) const
    {
        auto v = ToReal(s);
        if (!v || std::fabs(*v) > 1e9)
        {
            Fail(ScenarioErrorKind::SyntaxError,
                 std::string("bad ") + what + " '" + std::string(s) + "'");
        }
        return *v;
    }

    Scenario m_scenario;
    size_t m_line{0};
    std::set<std::string> m_seen;
    std::map<NodeId, WaypointSchedule> m_nodes;
    std::map<NodeId, size_t> m_nodeLines;
    std::vector<Move> m_moves;
    std::vector<size_t> m_flowLines;

    friend void manet::ApplyOverride(Scenario&, std::string_view, std::string_view);
};

double
ParamReal(const Scenario& s, const char* key, double fallback)
{
    auto it = s.params.find(key);
    return it == s.params.end() ? fallback : *ToReal(it->second);
}

uint64_t
ParamCount(const Scenario& s, const char* key, uint64_t fallback)
{
    auto it = s.params.find(key);
    return it == s.params.end() ? fallback : *ToUnsigned(it->second);
}

bool
ParamBool(const Scenario& s, const char* key, bool fallback)
{
    auto it = s.params.find(key);
    return it == s.params.end() ? fallback : it->second == "true";
}

} // namespace

std::string_view
ToString(ProtocolKind kind)
{
    return kind == ProtocolKind::Aodv ? "aodv" : "dsdv";
}

std::string_view
ToString(ScenarioErrorKind kind)
{
    switch (kind)
    {
    case ScenarioErrorKind::SyntaxError:
        return "SyntaxError";
    case ScenarioErrorKind::UnknownDirective:
        return "UnknownDirective";
    case ScenarioErrorKind::UndeclaredNode:
        return "UndeclaredNode";
    case ScenarioErrorKind::DuplicateNode:
        return "DuplicateNode";
    case ScenarioErrorKind::BadParameter:
        return "BadParameter";
    case ScenarioErrorKind::FileError:
        return "FileError";
    }
    return "?";
}

namespace
{

std::string
FormatError(ScenarioErrorKind kind, size_t line, const std::string& message)
{
    std::string out;
    if (line > 0)
    {
        out = "line " + std::to_string(line) + ": ";
    }
    out += ToString(kind);
    out += ": ";
    out += message;
    return out;
}

} // namespace

ScenarioError::ScenarioError(ScenarioErrorKind kind, size_t line, const std::string& message)
    : std::runtime_error(FormatError(kind, line, message)),
      m_kind(kind),
      m_line(line)
{
}

NetConfig
Scenario::Net() const
{
    NetConfig c;
    c.hopDelay = SimTime::FromSeconds(ParamReal(*this, "net.hop_delay", c.hopDelay.Seconds()));
    c.jitterMax = SimTime::FromSeconds(ParamReal(*this, "net.jitter", c.jitterMax.Seconds()));
    c.dropProb = ParamReal(*this, "net.drop_prob", c.dropProb);
    return c;
}

dsdv::Config
Scenario::Dsdv() const
{
    dsdv::Config c;
    c.periodicInterval = SimTime::FromSeconds(
        ParamReal(*this, "dsdv.periodic_interval", c.periodicInterval.Seconds()));
    c.settlingWeight = ParamReal(*this, "dsdv.settling_weight", c.settlingWeight);
    c.settlingFactor = ParamReal(*this, "dsdv.settling_factor", c.settlingFactor);
    return c;
}

aodv::Config
Scenario::Aodv() const
{
    aodv::Config c;
    c.activeRouteTimeout = SimTime::FromSeconds(
        ParamReal(*this, "aodv.active_route_timeout", c.activeRouteTimeout.Seconds()));
    c.rreqRetries = static_cast<uint32_t>(ParamCount(*this, "aodv.rreq_retries", c.rreqRetries));
    c.discoveryWait =
        SimTime::FromSeconds(ParamReal(*this, "aodv.discovery_wait", c.discoveryWait.Seconds()));
    c.multipath = ParamBool(*this, "aodv.multipath", c.multipath);
    c.intermediateRrep = ParamBool(*this, "aodv.intermediate_rrep", c.intermediateRrep);
    c.bufferCapacity = ParamCount(*this, "aodv.buffer_capacity", c.bufferCapacity);
    return c;
}

Scenario
ParseScenario(std::string_view text)
{
    try
    {
        return Parser{}.Run(text);
    }
    catch (const ScenarioError&)
    {
        throw;
    }
    catch (const std::exception& e)
    {
        throw ScenarioError(ScenarioErrorKind::SyntaxError, 0, e.what());
    }
}

Scenario
LoadScenarioFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ScenarioError(ScenarioErrorKind::FileError, 0, "cannot read scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try
    {
        return ParseScenario(buf.str());
    }
    catch (const ScenarioError& e)
    {
        throw ScenarioError(e.kind(), e.line(), path + ": " + e.what());
    }
}

void
ApplyOverride(Scenario& scenario, std::string_view key, std::string_view value)
{
    Parser p;
    p.m_scenario = scenario;
    if (key == "protocol")
    {
        p.SetProtocol(value);
    }
    else if (key == "seed")
    {
        p.SetSeed(value);
    }
    else if (key == "duration")
    {
        p.SetDuration(value);
    }
    else if (ParamTable().count(key))
    {
        p.SetParam(key, value);
    }
    else
    {
        throw ScenarioError(ScenarioErrorKind::BadParameter,
                            0,
                            "cannot override '" + std::string(key) +
                                "' (allowed: protocol, seed, duration, parameter keys)");
    }
    scenario = std::move(p.m_scenario);
}

std::vector<std::string>
ParameterKeys()
{
    std::vector<std::string> keys;
    for (const auto& [k, t] : ParamTable())
    {
        keys.push_back(k);
    }
    return keys;
}

} // namespace manet
