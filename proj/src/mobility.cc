#include "manet/mobility.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace manet
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Quadratic
{
    double a;
    double b;
    double c;
};

} // namespace

double
Distance(const Position& a, const Position& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

Mobility::Mobility(std::vector<WaypointSchedule> schedules)
{
    std::sort(schedules.begin(), schedules.end(), [](const auto& l, const auto& r) {
        return l.node < r.node;
    });
    for (size_t i = 0; i < schedules.size(); ++i)
    {
        if (schedules[i].node != i)
        {
            throw InvalidSchedule("node ids must be dense from 0; missing or duplicate id near " +
                                  std::to_string(i));
        }
    }

    m_tracks.reserve(schedules.size());
    for (const auto& s : schedules)
    {
        std::vector<Segment> track;
        Position here = s.initial;
        double t = 0.0;
        for (const auto& leg : s.legs)
        {
            double depart = leg.departAt.Seconds();
            if (!(leg.speed > 0.0) || !std::isfinite(leg.speed))
            {
                throw InvalidSchedule("node " + std::to_string(s.node) +
                                      ": leg speed must be positive");
            }
            if (depart < t)
            {
                throw InvalidSchedule("node " + std::to_string(s.node) + ": leg departing at " +
                                      leg.departAt.ToString() +
                                      " starts before the previous leg arrives");
            }
            if (depart > t)
            {
                track.push_back({t, depart, here, 0.0, 0.0});
            }
            double length = Distance(here, leg.destination);
            double duration = length / leg.speed;
            if (duration > 0.0)
            {
                double vx = (leg.destination.x - here.x) / duration;
                double vy = (leg.destination.y - here.y) / duration;
                track.push_back({depart, depart + duration, here, vx, vy});
            }
            here = leg.destination;
            t = depart + duration;
        }
        track.push_back({t, kInf, here, 0.0, 0.0});
        m_tracks.push_back(std::move(track));
    }
}

const std::vector<Mobility::Segment>&
Mobility::Track(NodeId node) const
{
    if (node >= m_tracks.size())
    {
        throw UnknownNode("unknown node " + std::to_string(node));
    }
    return m_tracks[node];
}

const Mobility::Segment&
Mobility::Locate(const std::vector<Segment>& track, double t)
{
    // Last segment whose start <= t; the first segment starts at 0.
    auto it = std::upper_bound(track.begin(), track.end(), t, [](double v, const Segment& s) {
        return v < s.start;
    });
    return (it == track.begin()) ? track.front() : *std::prev(it);
}

Position
Mobility::PositionAt(NodeId node, SimTime t) const
{
    double ts = t.Seconds();
    return Locate(Track(node), ts).At(ts);
}

bool
Mobility::InRange(NodeId a, NodeId b, SimTime t, double radioRange) const
{
    return Distance(PositionAt(a, t), PositionAt(b, t)) <= radioRange;
}

std::vector<std::pair<NodeId, NodeId>>
Mobility::LinksAt(SimTime t, double radioRange) const
{
    std::vector<std::pair<NodeId, NodeId>> links;
    for (NodeId a = 0; a < m_tracks.size(); ++a)
    {
        for (NodeId b = a + 1; b < m_tracks.size(); ++b)
        {
            if (InRange(a, b, t, radioRange))
            {
                links.emplace_back(a, b);
            }
        }
    }
    return links;
}

std::vector<LinkEvent>
Mobility::ConnectivityEvents(double radioRange, SimTime horizon) const
{
    std::vector<LinkEvent> events;
    const double end = horizon.Seconds();
    const double r2 = radioRange * radioRange;

    for (NodeId a = 0; a < m_tracks.size(); ++a)
    {
        for (NodeId b = a + 1; b < m_tracks.size(); ++b)
        {
            const auto& ta = m_tracks[a];
            const auto& tb = m_tracks[b];

            // Breakpoints of both tracks inside [0, end].
            std::vector<double> cuts{0.0, end};
            for (const auto* track : {&ta, &tb})
            {
                for (const auto& s : *track)
                {
                    if (s.start > 0.0 && s.start < end)
                    {
                        cuts.push_back(s.start);
                    }
                }
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

            auto emit = [&](double t, LinkChange kind) {
                events.push_back({SimTime::FromSeconds(t), a, b, kind});
            };

            bool up = false;
            for (size_t i = 0; i + 1 < cuts.size(); ++i)
            {
                double lo = cuts[i];
                double hi = cuts[i + 1];
                double len = hi - lo;
                const Segment& sa = Locate(ta, lo);
                const Segment& sb = Locate(tb, lo);
                Position posA = sa.At(lo);
                Position posB = sb.At(lo);
                double vx = sb.vx - sa.vx;
                double vy = sb.vy - sa.vy;
                double rx = posB.x - posA.x;
                double ry = posB.y - posA.y;

                Quadratic q{vx * vx + vy * vy, 2.0 * (rx * vx + ry * vy), rx * rx + ry * ry - r2};
                bool inAtStart = q.c <= 0.0;

                if (i == 0)
                {
                    up = inAtStart;
                }
                else if (up != inAtStart)
                {
                    emit(lo, inAtStart ? LinkChange::Up : LinkChange::Down);
                    up = inAtStart;
                }

                if (q.a == 0.0)
                {
                    continue;
                }
                double disc = q.b * q.b - 4.0 * q.a * q.c;
                if (disc <= 0.0)
                {
                    // At most a tangent touch: out of range for the whole piece.
                    if (up)
                    {
                        emit(lo, LinkChange::Down);
                        up = false;
                    }
                    continue;
                }
                double sq = std::sqrt(disc);
                // Numerically stable root pair.
                double qq = -0.5 * (q.b + std::copysign(sq, q.b));
                double r1 = qq / q.a;
                double r2root = (qq != 0.0) ? q.c / qq : -r1;
                double enter = std::min(r1, r2root);
                double leave = std::max(r1, r2root);

                if (!up && enter > 0.0 && enter < len)
                {
                    emit(lo + enter, LinkChange::Up);
                    up = true;
                }
                if (up && leave >= 0.0 && leave < len)
                {
                    emit(lo + leave, LinkChange::Down);
                    up = false;
                }
            }
        }
    }

    std::stable_sort(events.begin(), events.end(), [](const LinkEvent& l, const LinkEvent& r) {
        if (l.at != r.at)
        {
            return l.at < r.at;
        }
        if (l.a != r.a)
        {
            return l.a < r.a;
        }
        return l.b < r.b;
    });
    return events;
}

} // namespace manet
