#include "manet/aodv.h"
#include "manet/simulation.h"

#include "oracles.h"

#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

using namespace manet;
using namespace manet::aodv;

namespace
{

const std::vector<Position> kFar{{5000, 5000}, {6000, 6000}};

/// Nodes 4-3-1 on a line 200 m apart; 0 and 2 far away.
std::string
LineText(const std::string& extra)
{
    std::vector<Position> nodes{{5000, 5000}, {400, 0}, {6000, 6000}, {200, 0}, {0, 0}};
    return oracle::StaticScenarioText("aodv", nodes, 250, 30, 1) + "param net.jitter 0\n" + extra;
}

/// 4 reaches 1 through 3 or 0; 2 far away.
std::string
DiamondText(const std::string& extra)
{
    std::vector<Position> nodes{{180, -130}, {360, 0}, {5000, 5000}, {180, 130}, {0, 0}};
    return oracle::StaticScenarioText("aodv", nodes, 250, 30, 1) + extra;
}

std::unique_ptr<Simulation>
Run(const std::string& text)
{
    return RunScenario(ParseScenario(text));
}

} // namespace

TEST_CASE("routing table acceptance rules")
{
    RoutingTable t(false);
    CHECK(t.Offer(1, 10, 3, 1, Seconds(5)) == OfferResult::Installed);
    CHECK(t.Find(1)->HopCount() == 2);

    SUBCASE("older sequence numbers are discarded")
    {
        CHECK(t.Offer(1, 9, 2, 0, Seconds(5)) == OfferResult::Rejected);
        CHECK(t.Find(1)->paths.front().nextHop == 3);
    }
    SUBCASE("equal sequence number needs fewer hops")
    {
        CHECK(t.Offer(1, 10, 2, 1, Seconds(5)) == OfferResult::Rejected);
        CHECK(t.Offer(1, 10, 2, 0, Seconds(5)) == OfferResult::Installed);
        CHECK(t.Find(1)->paths.size() == 1);
        CHECK(t.Find(1)->paths.front() == RoutePath{2, 1});
    }
    SUBCASE("newer sequence number wins even when longer")
    {
        CHECK(t.Offer(1, 12, 2, 5, Seconds(5)) == OfferResult::Installed);
        CHECK(t.Find(1)->HopCount() == 6);
    }
    SUBCASE("same path refreshes")
    {
        CHECK(t.Offer(1, 10, 3, 1, Seconds(9)) == OfferResult::Refreshed);
        CHECK(t.Find(1)->expiresAt == Seconds(9));
    }
    SUBCASE("broken entry takes an equal sequence number")
    {
        auto inv = t.RemoveNextHop(3, Seconds(1));
        REQUIRE(inv.size() == 1);
        CHECK(inv[0].destSeq == 11);
        CHECK(t.Find(1)->Broken());
        CHECK(t.Offer(1, 10, 2, 0, Seconds(5)) == OfferResult::Rejected);
        CHECK(t.Offer(1, 11, 2, 0, Seconds(5)) == OfferResult::Installed);
    }
}

TEST_CASE("idle route becomes unusable just after its timeout")
{
    RoutingTable t(false);
    t.Offer(1, 2, 1, 0, Seconds(3));
    CHECK(t.Find(1)->Usable(Seconds(3)));
    CHECK_FALSE(t.Find(1)->Usable(Seconds(3) + SimTime::FromMicros(1)));
    CHECK(t.Expire(Seconds(3.000001)) == 1);
    CHECK(t.Find(1)->destSeq == 2);
}

TEST_CASE("multipath alternates obey the advertised hop rule")
{
    RoutingTable t(true);
    t.Offer(1, 4, 3, 1, Seconds(5)); // 2 hops, advertised 2
    CHECK(t.Offer(1, 4, 0, 1, Seconds(5)) == OfferResult::AddedAlternate);
    CHECK(t.Offer(1, 4, 2, 2, Seconds(5)) == OfferResult::Rejected);
    CHECK(t.Find(1)->paths.size() == 2);
    CHECK(t.Find(1)->advertisedHops == 2);
    // Losing one path keeps the entry.
    CHECK(t.RemoveNextHop(3, Seconds(1)).empty());
    CHECK(t.Find(1)->paths.size() == 1);
    // A new sequence number resets the set.
    CHECK(t.Offer(1, 6, 2, 3, Seconds(5)) == OfferResult::Installed);
    CHECK(t.Find(1)->paths == std::vector<RoutePath>{{2, 4}});
}

TEST_CASE("line discovery installs a two-hop route via the relay")
{
    auto sim = Run(LineText("flow cbr from 4 to 1 start 1 stop 2 rate 4096 size 512\n"));
    const auto* e = sim->AodvAgent(4)->Table().Find(1);
    REQUIRE(e);
    CHECK(e->paths.front() == RoutePath{3, 2});
    // The relay learned the forward route while passing the reply on.
    const auto* relay = sim->AodvAgent(3)->Table().Find(1);
    REQUIRE(relay);
    CHECK(relay->paths.front() == RoutePath{1, 1});
    // Destination replied exactly once.
    CHECK(oracle::CountTrace(sim->TraceText(), "s", "1", "rrep") == 1);
    // The origin never forwards its own request.
    CHECK(oracle::CountTrace(sim->TraceText(), "f", "4", "rreq") == 0);
    CHECK(sim->Accounting().Summary().delivered == 1);
}

TEST_CASE("an existing route sends without a new discovery")
{
    auto sim = Run(LineText("flow cbr from 4 to 1 start 1 stop 3 rate 16384 size 512\n"));
    CHECK(oracle::CountTrace(sim->TraceText(), "s", "4", "rreq") == 1);
    CHECK(sim->Accounting().Summary().delivered == 8);
}

TEST_CASE("buffered packets leave in FIFO order once the reply arrives")
{
    // 1 ms emission interval against a multi-millisecond discovery.
    auto sim = Run(LineText("flow cbr from 4 to 1 start 1 stop 1.01 rate 4096000 size 512\n"));
    const auto& d = sim->Accounting().Deliveries();
    REQUIRE(d.size() == 10);
    for (size_t i = 0; i < d.size(); ++i)
    {
        CHECK(d[i].seqNo == i);
    }
}

TEST_CASE("unreachable destination exhausts retries and drops as NRTE")
{
    std::vector<Position> nodes{{0, 0}, {1000, 0}};
    auto text = oracle::StaticScenarioText("aodv", nodes, 250, 10, 1) +
                "flow cbr from 0 to 1 start 1 stop 1.5 rate 16384 size 512\n";
    auto sim = Run(text);
    CHECK(oracle::CountTrace(sim->TraceText(), "s", "0", "rreq") == 3);
    const auto& s = sim->Accounting().Summary();
    CHECK(s.dropped.at(DropReason::NoRoute) == 2);
    CHECK(s.sent == s.delivered + s.TotalDropped());
    CHECK(sim->TraceText().find("d 4.000000 0 RTR cbr 0 512 NRTE\n") != std::string::npos);
}

TEST_CASE("buffer overflow drops the oldest packet")
{
    std::vector<Position> nodes{{0, 0}, {1000, 0}};
    auto text = oracle::StaticScenarioText("aodv", nodes, 250, 10, 1) +
                "param aodv.buffer_capacity 2\n"
                "flow cbr from 0 to 1 start 1 stop 2 rate 16384 size 512\n";
    auto sim = Run(text);
    const auto& s = sim->Accounting().Summary();
    CHECK(s.dropped.at(DropReason::BufferOverflow) == 2);
    auto pos = sim->TraceText().find("d 1.500000 0 RTR cbr 0 512 IFQ");
    CHECK(pos != std::string::npos);
}

TEST_CASE("multipath discovery on the diamond yields two next hops")
{
    auto sim = Run(DiamondText("param aodv.multipath true\n"
                               "flow cbr from 4 to 1 start 1 stop 2 rate 16384 size 512\n"));
    const auto* e = sim->AodvAgent(4)->Table().Find(1);
    REQUIRE(e);
    std::set<NodeId> hops;
    for (const auto& p : e->paths)
    {
        hops.insert(p.nextHop);
        CHECK(p.hops == 2);
    }
    CHECK(hops == std::set<NodeId>{0, 3});
    CHECK(oracle::CountTrace(sim->TraceText(), "s", "4", "rreq") == 1);
}

TEST_CASE("single-path mode keeps one next hop on the diamond")
{
    auto sim = Run(DiamondText("flow cbr from 4 to 1 start 1 stop 2 rate 16384 size 512\n"));
    CHECK(sim->AodvAgent(4)->Table().Find(1)->paths.size() == 1);
    CHECK(oracle::CountTrace(sim->TraceText(), "s", "1", "rrep") == 1);
}

TEST_CASE("break on a route nobody uses upstream sends no RERR")
{
    // Node 1 walks away from the relay after the flow has ended.
    std::vector<Position> nodes{{5000, 5000}, {400, 0}, {6000, 6000}, {200, 0}, {0, 0}};
    auto text = oracle::StaticScenarioText("aodv", nodes, 250, 30, 1) +
                "move 4 from 5 to -600 0 speed 100\n"
                "flow cbr from 4 to 1 start 1 stop 2 rate 16384 size 512\n";
    auto sim = Run(text);
    // Node 3 loses 4 (a precursor-less reverse route owner); nothing upstream.
    CHECK(oracle::CountTrace(sim->TraceText(), "s", "", "rerr") == 0);
}

TEST_CASE("route refreshed by traffic does not expire")
{
    auto sim = Run(LineText("flow cbr from 4 to 1 start 1 stop 25 rate 4096 size 512\n"));
    CHECK(oracle::CountTrace(sim->TraceText(), "s", "4", "rreq") == 1);
    CHECK(sim->Accounting().Summary().delivered == 24);
}

TEST_CASE("short active route timeout causes repeated discoveries")
{
    auto sim = Run(LineText("param aodv.active_route_timeout 0.5\n"
                            "flow cbr from 4 to 1 start 1 stop 25 rate 4096 size 512\n"));
    // Each 1 s emission finds the 0.5 s route expired.
    CHECK(oracle::CountTrace(sim->TraceText(), "s", "4", "rreq") == 24);
    CHECK(sim->Accounting().Summary().delivered == 24);
}

TEST_CASE("no traffic, no control packets")
{
    auto sim = Run(DiamondText(""));
    CHECK(sim->Accounting().Summary().TotalControl() == 0);
    CHECK(sim->TraceText().empty());
}

TEST_CASE("random runs: invariants hold at every event boundary")
{
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 16; ++trial)
    {
        bool multipath = trial % 2 == 1;
        auto scenario = ParseScenario(oracle::RandomMobileScenarioText(rng, "aodv", multipath));
        Simulation sim(scenario);
        size_t n = scenario.nodes.size();
        std::map<std::pair<NodeId, NodeId>, uint32_t> lastSeq;
        size_t seqRegressions = 0;
        size_t pathViolations = 0;
        sim.Engine().SetDispatchObserver([&](const DispatchRecord&) {
            for (NodeId u = 0; u < n; ++u)
            {
                for (const auto& [dest, e] : sim.AodvAgent(u)->Table().Entries())
                {
                    auto [it, fresh] = lastSeq.try_emplace({u, dest}, e.destSeq);
                    seqRegressions += e.destSeq < it->second;
                    it->second = e.destSeq;
                    std::set<NodeId> hops;
                    for (const auto& p : e.paths)
                    {
                        pathViolations += !hops.insert(p.nextHop).second;
                        pathViolations += p.hops > e.advertisedHops;
                    }
                    pathViolations += !multipath && e.paths.size() > 1;
                }
            }
        });
        sim.Run();
        CHECK(seqRegressions == 0);
        CHECK(pathViolations == 0);

        // Each request id is transmitted at most once per node.
        std::map<std::string, size_t> transmissions;
        std::istringstream in(sim.TraceText());
        std::string action, t, node, layer, kind, id;
        std::string line;
        while (std::getline(in, line))
        {
            std::istringstream f(line);
            f >> action >> t >> node >> layer >> kind >> id;
            if (kind == "rreq" && (action == "s" || action == "f"))
            {
                ++transmissions[id];
            }
        }
        for (const auto& [rid, count] : transmissions)
        {
            CHECK(count <= n);
        }
        const auto& s = sim.Accounting().Summary();
        CHECK(s.sent == s.delivered + s.TotalDropped());
    }
}
