#include "manet/mobility.h"
#include "manet/scenario.h"

#include "oracles.h"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

using namespace manet;

namespace
{

WaypointSchedule
Still(NodeId id, double x, double y)
{
    return {id, {x, y}, {}};
}

/// Bisection on the sampled distance between two schedules.
double
CrossingTime(const WaypointSchedule& a, const WaypointSchedule& b, double range, double lo, double hi)
{
    auto gap = [&](double t) {
        auto pa = oracle::Walk(a, t);
        auto pb = oracle::Walk(b, t);
        return std::hypot(pa.x - pb.x, pa.y - pb.y) - range;
    };
    bool loSign = gap(lo) > 0;
    for (int i = 0; i < 100; ++i)
    {
        double mid = 0.5 * (lo + hi);
        ((gap(mid) > 0) == loSign ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

const LinkEvent*
FindEvent(const std::vector<LinkEvent>& events, NodeId a, NodeId b, LinkChange kind)
{
    for (const auto& e : events)
    {
        if (e.a == a && e.b == b && e.kind == kind)
        {
            return &e;
        }
    }
    return nullptr;
}

} // namespace

TEST_CASE("position of a stationary node")
{
    Mobility m({Still(0, 3, 4)});
    CHECK(m.PositionAt(0, Seconds(0)) == Position{3, 4});
    CHECK(m.PositionAt(0, Seconds(1000)) == Position{3, 4});
    CHECK_THROWS_AS(m.PositionAt(1, Seconds(0)), UnknownNode);
}

TEST_CASE("position midway along a leg")
{
    Mobility m({{0, {0, 0}, {{Seconds(0), {100, 0}, 10.0}}}});
    auto p = m.PositionAt(0, Seconds(5));
    CHECK(p.x == doctest::Approx(50.0));
    CHECK(p.y == doctest::Approx(0.0));
    CHECK(m.PositionAt(0, Seconds(20)) == Position{100, 0});
}

TEST_CASE("range boundary and coincident nodes")
{
    Mobility m({Still(0, 0, 0), Still(1, 0, 0), Still(2, 250, 0)});
    CHECK(m.InRange(0, 1, Seconds(0), 0.001));
    CHECK(m.InRange(0, 2, Seconds(0), 250.0));
    CHECK_FALSE(m.InRange(0, 2, Seconds(0), 249.999));
    CHECK(m.InRange(2, 0, Seconds(0), 250.0));
}

TEST_CASE("invalid schedules are rejected")
{
    CHECK_THROWS_AS(Mobility({{0, {0, 0}, {{Seconds(1), {10, 0}, 0.0}}}}), InvalidSchedule);
    // Second leg departs before the first (10 s long) arrives.
    CHECK_THROWS_AS(
        Mobility({{0, {0, 0}, {{Seconds(0), {100, 0}, 10.0}, {Seconds(5), {0, 0}, 10.0}}}}),
        InvalidSchedule);
    CHECK_THROWS_AS(Mobility({Still(1, 0, 0)}), InvalidSchedule);
}

TEST_CASE("stationary connected nodes produce no link events")
{
    Mobility m({Still(0, 0, 0), Still(1, 100, 0), Still(2, 50, 50)});
    CHECK(m.ConnectivityEvents(250, Seconds(100)).empty());
}

TEST_CASE("approaching nodes cross range at the closed-form instant")
{
    // Node 1 starts 400 m away and approaches at 7 m/s from t = 2.
    Mobility m({Still(0, 0, 0), {1, {400, 30}, {{Seconds(2), {0, 30}, 7.0}}}});
    auto events = m.ConnectivityEvents(250, Seconds(100));
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == LinkChange::Up);
    double expected = 2.0 + (400.0 - std::sqrt(250.0 * 250.0 - 30.0 * 30.0)) / 7.0;
    CHECK(events[0].at.Seconds() == doctest::Approx(expected).epsilon(1e-6));

    // 1 ms sampling oracle agrees on the side of the crossing.
    WaypointSchedule a = Still(0, 0, 0);
    WaypointSchedule b{1, {400, 30}, {{Seconds(2), {0, 30}, 7.0}}};
    double t = events[0].at.Seconds();
    CHECK_FALSE(oracle::SampledLink(a, b, t - 0.001, 250));
    CHECK(oracle::SampledLink(a, b, t + 0.001, 250));
}

TEST_CASE("case-study schedule crosses range at the narrated instants")
{
    auto s = LoadScenarioFile(SCENARIO_DIR "/paper_aodv.scn");
    Mobility m(s.nodes);
    auto events = m.ConnectivityEvents(s.radioRange, s.duration);

    const auto* d14 = FindEvent(events, 1, 4, LinkChange::Down);
    const auto* d13 = FindEvent(events, 1, 3, LinkChange::Down);
    const auto* d04 = FindEvent(events, 0, 4, LinkChange::Down);
    REQUIRE(d14);
    REQUIRE(d13);
    REQUIRE(d04);
    const auto* d34 = FindEvent(events, 3, 4, LinkChange::Down);
    REQUIRE(d34);
    CHECK(d34->at > Seconds(59));
    CHECK(d34->at < Seconds(70));
    CHECK(std::fabs(d14->at.Seconds() - 55.0) <= 0.1);
    CHECK(std::fabs(d13->at.Seconds() - 59.0) <= 0.1);
    CHECK(std::fabs(d04->at.Seconds() - 103.0) <= 0.1);

    // Root-finding oracle on the distance function.
    CHECK(d14->at.Seconds() == doctest::Approx(CrossingTime(s.nodes[1], s.nodes[4], 250, 45, 70)).epsilon(1e-5));
    CHECK(d13->at.Seconds() == doctest::Approx(CrossingTime(s.nodes[1], s.nodes[3], 250, 45, 70)).epsilon(1e-5));
    CHECK(d04->at.Seconds() == doctest::Approx(CrossingTime(s.nodes[0], s.nodes[4], 250, 98, 120)).epsilon(1e-5));

    CHECK(m.InRange(4, 0, Seconds(70), 250));
    CHECK_FALSE(m.InRange(4, 1, Seconds(70), 250));
    CHECK_FALSE(m.InRange(4, 3, Seconds(70), 250));
}

TEST_CASE("link events agree with sampling on random schedules")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto scenario = ParseScenario(oracle::RandomMobileScenarioText(rng, "aodv", false));
        const double range = scenario.radioRange;
        Mobility m(scenario.nodes);
        auto events = m.ConnectivityEvents(range, scenario.duration);

        std::map<std::pair<NodeId, NodeId>, std::vector<const LinkEvent*>> perPair;
        for (size_t i = 0; i < events.size(); ++i)
        {
            const auto& e = events[i];
            REQUIRE(e.a < e.b);
            if (i > 0)
            {
                CHECK(events[i - 1].at <= e.at);
            }
            perPair[{e.a, e.b}].push_back(&e);
        }

        size_t n = m.NodeCount();
        size_t asymmetric = 0;
        for (NodeId a = 0; a < n; ++a)
        {
            for (NodeId b = a + 1; b < n; ++b)
            {
                const auto& list = perPair[{a, b}];
                bool state = oracle::SampledLink(scenario.nodes[a], scenario.nodes[b], 0.0, range);
                // Alternation, starting from the initial state.
                for (const auto* e : list)
                {
                    CHECK(e->kind == (state ? LinkChange::Down : LinkChange::Up));
                    state = !state;
                }
                // Reconstruct and compare at 1 ms steps away from crossings.
                size_t next = 0;
                bool up = oracle::SampledLink(scenario.nodes[a], scenario.nodes[b], 0.0, range);
                for (int64_t us = 0; us <= scenario.duration.Micros(); us += 1000)
                {
                    while (next < list.size() && list[next]->at.Micros() <= us)
                    {
                        up = list[next]->kind == LinkChange::Up;
                        ++next;
                    }
                    bool nearCrossing = false;
                    for (const auto* e : list)
                    {
                        nearCrossing |= std::llabs(e->at.Micros() - us) <= 2000;
                    }
                    if (nearCrossing)
                    {
                        continue;
                    }
                    bool sampled =
                        oracle::SampledLink(scenario.nodes[a], scenario.nodes[b], us / 1e6, range);
                    if (sampled != up)
                    {
                        FAIL("pair " << a << "-" << b << " disagrees at " << us << " us");
                    }
                    if (us % 100000 == 0)
                    {
                        asymmetric += m.InRange(a, b, SimTime::FromMicros(us), range) !=
                                      m.InRange(b, a, SimTime::FromMicros(us), range);
                    }
                }
            }
        }
        CHECK(asymmetric == 0);
    }
}
