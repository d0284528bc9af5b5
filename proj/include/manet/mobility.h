#ifndef MANET_MOBILITY_H
#define MANET_MOBILITY_H

#include "manet/sim_time.h"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace manet
{

using NodeId = uint32_t;

struct Position
{
    double x{0.0};
    double y{0.0};

    bool operator==(const Position&) const = default;
};

double Distance(const Position& a, const Position& b);

struct WaypointLeg
{
    SimTime departAt;
    Position destination;
    double speed{1.0}; ///< m/s, > 0
};

/// Piecewise-linear motion: stationary at `initial` until the first leg
/// departs, stationary between a leg's arrival and the next departure.
struct WaypointSchedule
{
    NodeId node{0};
    Position initial;
    std::vector<WaypointLeg> legs;
};

enum class LinkChange : uint8_t
{
    Up,
    Down,
};

struct LinkEvent
{
    SimTime at;
    NodeId a{0}; ///< a < b
    NodeId b{0};
    LinkChange kind{LinkChange::Up};

    bool operator==(const LinkEvent&) const = default;
};

class UnknownNode : public std::out_of_range
{
  public:
    using std::out_of_range::out_of_range;
};

class InvalidSchedule : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Node motion over time and the unit-disk connectivity it induces.
 *
 * Schedules are indexed by node id; ids must be dense from 0. Two nodes are
 * in range iff their euclidean distance is <= the radio range.
 */
class Mobility
{
  public:
    /// Throws InvalidSchedule on unsorted or overlapping legs, non-positive
    /// speed, or ids that are not dense from 0.
    explicit Mobility(std::vector<WaypointSchedule> schedules);

    size_t NodeCount() const
    {
        return m_tracks.size();
    }

    Position PositionAt(NodeId node, SimTime t) const;

    bool InRange(NodeId a, NodeId b, SimTime t, double radioRange) const;

    /// Pairs (a < b) in range at time t.
    std::vector<std::pair<NodeId, NodeId>> LinksAt(SimTime t, double radioRange) const;

    /// Every range crossing in (0, horizon], sorted by (time, a, b). Crossing
    /// instants are exact quadratic roots per motion segment, rounded to the
    /// microsecond. Per pair, up and down events alternate starting from the
    /// state at t = 0.
    std::vector<LinkEvent> ConnectivityEvents(double radioRange, SimTime horizon) const;

  private:
    /// Constant-velocity piece: position = origin + velocity * (t - start).
    struct Segment
    {
        double start;
        double end; ///< +inf for the final stationary piece
        Position origin;
        double vx;
        double vy;

        Position At(double t) const
        {
            double dt = t - start;
            if (vx == 0.0 && vy == 0.0)
            {
                return origin;
            }
            return {origin.x + vx * dt, origin.y + vy * dt};
        }
    };

    const std::vector<Segment>& Track(NodeId node) const;
    static const Segment& Locate(const std::vector<Segment>& track, double t);

    std::vector<std::vector<Segment>> m_tracks;
};

} // namespace manet

#endif
