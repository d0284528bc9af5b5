#ifndef MANET_SCENARIO_H
#define MANET_SCENARIO_H

#include "manet/aodv.h"
#include "manet/dsdv.h"
#include "manet/mobility.h"
#include "manet/network.h"
#include "manet/traffic.h"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace manet
{

enum class ProtocolKind : uint8_t
{
    Dsdv,
    Aodv,
};

std::string_view ToString(ProtocolKind kind);

/**
 * A complete simulation description.
 *
 * Text form, one directive per line, `#` starts a comment:
 *
 *     protocol aodv
 *     duration 120
 *     seed 42
 *     range 250
 *     node 3 at 120 340
 *     move 3 from 55.0 to 600 340 speed 12
 *     flow cbr from 4 to 1 start 10 stop 120 rate 16384 size 512
 *     param aodv.multipath false
 */
struct Scenario
{
    ProtocolKind protocol{ProtocolKind::Aodv};
    SimTime duration;
    uint64_t seed{1};
    double radioRange{250.0};
    std::vector<WaypointSchedule> nodes; ///< indexed by node id
    std::vector<Flow> flows;
    std::map<std::string, std::string> params; ///< validated, canonical text

    NetConfig Net() const;
    dsdv::Config Dsdv() const;
    aodv::Config Aodv() const;
};

enum class ScenarioErrorKind : uint8_t
{
    SyntaxError,
    UnknownDirective,
    UndeclaredNode,
    DuplicateNode,
    BadParameter,
    FileError,
};

std::string_view ToString(ScenarioErrorKind kind);

/// Parse or validation failure. line() is 1-based; 0 when not tied to a line.
class ScenarioError : public std::runtime_error
{
  public:
    ScenarioError(ScenarioErrorKind kind, size_t line, const std::string& message);

    ScenarioErrorKind kind() const
    {
        return m_kind;
    }

    size_t line() const
    {
        return m_line;
    }

  private:
    ScenarioErrorKind m_kind;
    size_t m_line;
};

/// Never throws anything but ScenarioError.
Scenario ParseScenario(std::string_view text);

/// Reads and parses a file; a missing or unreadable file is a FileError that
/// names the path.
Scenario LoadScenarioFile(const std::string& path);

/// Applies a `key=value` override exactly as the equivalent scenario line
/// would. Allowed keys: protocol, seed, duration, and parameter keys.
void ApplyOverride(Scenario& scenario, std::string_view key, std::string_view value);

/// The recognised parameter keys.
std::vector<std::string> ParameterKeys();

} // namespace manet

#endif
