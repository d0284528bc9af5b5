#include "manet/simulation.h"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace manet
{

Simulation::Simulation(const Scenario& scenario)
    : m_scenario(scenario),
      m_mobility(scenario.nodes),
      m_linkEvents(m_mobility.ConnectivityEvents(scenario.radioRange, scenario.duration))
{
    size_t n = m_mobility.NodeCount();
    m_network = std::make_unique<Network>(
        m_engine, n, scenario.Net(), scenario.seed, &m_trace, m_accounting);
    for (NodeId i = 0; i < n; ++i)
    {
        if (scenario.protocol == ProtocolKind::Dsdv)
        {
            m_agents.push_back(
                std::make_unique<dsdv::Agent>(i, *m_network, scenario.Dsdv(), scenario.seed));
        }
        else
        {
            m_agents.push_back(std::make_unique<aodv::Agent>(i, *m_network, scenario.Aodv()));
        }
        m_network->Attach(i, m_agents.back().get());
    }
    for (const auto& flow : scenario.flows)
    {
        m_emissions.push_back(EmissionTimes(flow));
        m_flowSeq.push_back(0);
    }
}

Simulation::~Simulation() = default;

RoutingProtocol&
Simulation::Protocol(NodeId node) const
{
    if (node >= m_agents.size())
    {
        throw UnknownNode("node " + std::to_string(node));
    }
    return *m_agents[node];
}

dsdv::Agent*
Simulation::DsdvAgent(NodeId node) const
{
    return dynamic_cast<dsdv::Agent*>(&Protocol(node));
}

aodv::Agent*
Simulation::AodvAgent(NodeId node) const
{
    return dynamic_cast<aodv::Agent*>(&Protocol(node));
}

void
Simulation::Run()
{
    if (m_ran)
    {
        throw std::logic_error("Simulation::Run called twice");
    }
    m_ran = true;

    for (auto [a, b] : m_mobility.LinksAt(SimTime(), m_scenario.radioRange))
    {
        m_network->SetLinkState(a, b, true);
    }
    for (auto& agent : m_agents)
    {
        agent->Start();
    }
    for (const auto& ev : m_linkEvents)
    {
        m_engine.Schedule(ev.at, EventKind::LinkChange, kEngineTarget, [this, ev] {
            m_network->SetLinkState(ev.a, ev.b, ev.kind == LinkChange::Up);
        });
    }
    for (size_t f = 0; f < m_emissions.size(); ++f)
    {
        EmitNext(f, 0);
    }

    m_engine.RunUntil(m_scenario.duration);

    for (const auto& p : m_accounting.Outstanding())
    {
        m_network->Drop(p.holder, Packet{p.pktId, p.packet.size, p.packet}, DropReason::EndOfRun);
    }
}

void
Simulation::EmitNext(size_t flowIndex, size_t k)
{
    const auto& times = m_emissions[flowIndex];
    if (k >= times.size() || times[k] > m_scenario.duration)
    {
        return;
    }
    const Flow& flow = m_scenario.flows[flowIndex];
    m_engine.Schedule(times[k], EventKind::TrafficEmit, static_cast<int32_t>(flow.src), [this, flowIndex, k] {
        const Flow& f = m_scenario.flows[flowIndex];
        DataPacket data{f.flowId, m_flowSeq[flowIndex]++, f.src, f.dst, f.packetSize, m_engine.Now(), 0};
        Packet packet{m_network->NextPacketId(), f.packetSize, data};
        m_network->Trace(TraceAction::Send,
                         f.src,
                         TraceLayer::Agent,
                         packet,
                         Network::Detail(packet, f.src, std::nullopt));
        m_accounting.OnSent(data, packet.id, f.src);
        EmitNext(flowIndex, k + 1);
        m_agents[f.src]->SendData(std::move(packet));
    });
}

ThroughputSeries
Simulation::Throughput(SimTime binWidth) const
{
    return BuildThroughputSeries(m_accounting.Deliveries(), binWidth, m_scenario.duration);
}

std::optional<std::vector<NodeId>>
FindForwardingLoop(const Network& network, NodeId dest)
{
    size_t n = network.NodeCount();
    // 0 unvisited, 1 on stack, 2 done
    std::vector<uint8_t> state(n, 0);
    std::vector<NodeId> stack;

    std::function<std::optional<std::vector<NodeId>>(NodeId)> visit =
        [&](NodeId u) -> std::optional<std::vector<NodeId>> {
        state[u] = 1;
        stack.push_back(u);
        if (u != dest)
        {
            for (NodeId v : network.Protocol(u).NextHops(dest))
            {
                if (v >= n)
                {
                    continue;
                }
                if (state[v] == 1)
                {
                    std::vector<NodeId> cycle;
                    auto it = std::find(stack.begin(), stack.end(), v);
                    cycle.assign(it, stack.end());
                    cycle.push_back(v);
                    return cycle;
                }
                if (state[v] == 0)
                {
                    if (auto c = visit(v))
                    {
                        return c;
                    }
                }
            }
        }
        stack.pop_back();
        state[u] = 2;
        return std::nullopt;
    };

    for (NodeId s = 0; s < n; ++s)
    {
        if (state[s] == 0)
        {
            if (auto c = visit(s))
            {
                return c;
            }
        }
    }
    return std::nullopt;
}

std::unique_ptr<Simulation>
RunScenario(const Scenario& scenario)
{
    auto sim = std::make_unique<Simulation>(scenario);
    sim->Run();
    return sim;
}

} // namespace manet
