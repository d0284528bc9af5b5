#include "manet/simulation.h"
#include "manet/traffic.h"

#include "oracles.h"

#include <doctest.h>

#include <random>

using namespace manet;

namespace
{

Flow
MakeFlow(double start, double stop, double rate, uint32_t size = 512)
{
    Flow f;
    f.startAt = Seconds(start);
    f.stopAt = Seconds(stop);
    f.rate = rate;
    f.packetSize = size;
    return f;
}

DataPacket
Data(uint64_t seq)
{
    return DataPacket{0, seq, 0, 1, 512, SimTime(), 0};
}

} // namespace

TEST_CASE("emission interval is size * 8 / rate")
{
    CHECK(EmissionInterval(MakeFlow(0, 1, 4096)) == Seconds(1));
    CHECK(EmissionInterval(MakeFlow(0, 1, 16384)) == Seconds(0.25));
}

TEST_CASE("emissions stop before the stop time")
{
    auto t = EmissionTimes(MakeFlow(10, 12, 4096));
    CHECK(t == std::vector<SimTime>{Seconds(10), Seconds(11)});
}

TEST_CASE("emission count matches integer arithmetic without drift")
{
    // Rates whose interval is a whole number of microseconds.
    const int divisors[] = {1, 2, 4, 5, 8, 10, 16, 20, 25, 32, 40, 50};
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i)
    {
        double start = static_cast<double>(rng() % 100);
        double stop = start + static_cast<double>(1 + rng() % 200);
        double rate = 4096.0 * divisors[rng() % std::size(divisors)];
        auto f = MakeFlow(start, stop, rate);
        auto times = EmissionTimes(f);
        int64_t interval = static_cast<int64_t>(4096.0 * 1e6 / rate);
        CHECK(EmissionInterval(f).Micros() == interval);
        CHECK(times.size() == oracle::EmissionCount(f.startAt.Micros(), f.stopAt.Micros(), interval));
        CHECK(times.back() == f.startAt + SimTime::FromMicros(interval * static_cast<int64_t>(times.size() - 1)));
    }
}

TEST_CASE("accounting")
{
    RunAccounting acc;
    SUBCASE("all delivered")
    {
        for (uint64_t i = 0; i < 5; ++i)
        {
            acc.OnSent(Data(i), i, 0);
            acc.OnDelivered(i, Seconds(1), 1);
        }
        CHECK(acc.Summary().DeliveryRatio() == 1.0);
    }
    SUBCASE("mixed fates conserve")
    {
        for (uint64_t i = 0; i < 10; ++i)
        {
            acc.OnSent(Data(i), i, 0);
            if (i < 7)
            {
                acc.OnDelivered(i, Seconds(1), 2);
            }
            else
            {
                acc.OnDropped(i, DropReason::NoRoute);
            }
        }
        const auto& s = acc.Summary();
        CHECK(s.DeliveryRatio() == doctest::Approx(0.7));
        CHECK(s.sent == s.delivered + s.TotalDropped());
        CHECK(s.MeanHops() == doctest::Approx(2.0));
        CHECK(acc.Outstanding().empty());
    }
    SUBCASE("a packet has exactly one fate")
    {
        acc.OnSent(Data(0), 0, 0);
        acc.OnDelivered(0, Seconds(1), 1);
        CHECK_THROWS_AS(acc.OnDropped(0, DropReason::Ttl), DoubleAccounting);
        CHECK_THROWS_AS(acc.OnDelivered(0, Seconds(1), 1), DoubleAccounting);
        CHECK_THROWS_AS(acc.OnSent(Data(0), 0, 0), DoubleAccounting);
    }
}

TEST_CASE("throughput series")
{
    SUBCASE("no deliveries gives zero bins through run end")
    {
        auto s = BuildThroughputSeries({}, Seconds(1), Seconds(5));
        REQUIRE(s.bins.size() == 5);
        for (const auto& b : s.bins)
        {
            CHECK(b.bits == 0);
        }
    }
    SUBCASE("one packet lands in its half-open bin")
    {
        std::vector<Delivery> d{{Seconds(10.5), 0, 0, 0, 4096, 1}, {Seconds(11), 1, 0, 1, 4096, 1}};
        auto s = BuildThroughputSeries(d, Seconds(1), Seconds(20));
        CHECK(s.bins[10].bits == 4096);
        CHECK(s.bins[11].bits == 4096);
        CHECK(s.bins[10].start == Seconds(10));
        CHECK(s.TotalBits() == 8192);
    }
    SUBCASE("non-positive width is rejected")
    {
        CHECK_THROWS_AS(BuildThroughputSeries({}, SimTime(), Seconds(5)), std::invalid_argument);
    }
}

TEST_CASE("case-study DSDV delivery ratio equals the share of packets sent before the break")
{
    auto sim = RunScenario(LoadScenarioFile(SCENARIO_DIR "/paper_dsdv.scn"));
    const auto& s = sim->Accounting().Summary();
    int64_t interval = 250'000;
    uint64_t before = oracle::EmissionCount(10'000'000, 55'000'000, interval);
    uint64_t all = oracle::EmissionCount(10'000'000, 120'000'000, interval);
    CHECK(s.sent == all);
    CHECK(s.delivered == before);
    CHECK(s.DeliveryRatio() == doctest::Approx(double(before) / double(all)));
}

TEST_CASE("case-study AODV: first delivery shortly after 10 and in-order per path")
{
    auto sim = RunScenario(LoadScenarioFile(SCENARIO_DIR "/paper_aodv.scn"));
    const auto& d = sim->Accounting().Deliveries();
    REQUIRE(!d.empty());
    CHECK(d.front().at >= Seconds(10));
    CHECK(d.front().at <= Seconds(10.2));
    for (size_t i = 1; i < d.size(); ++i)
    {
        CHECK(d[i].seqNo > d[i - 1].seqNo);
    }
    auto series = sim->Throughput(Seconds(1));
    CHECK(series.TotalBits() == sim->Accounting().Summary().deliveredBits);
}
