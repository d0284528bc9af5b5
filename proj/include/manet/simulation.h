#ifndef MANET_SIMULATION_H
#define MANET_SIMULATION_H

#include "manet/aodv.h"
#include "manet/dsdv.h"
#include "manet/mobility.h"
#include "manet/network.h"
#include "manet/scenario.h"
#include "manet/simulator.h"
#include "manet/trace.h"
#include "manet/traffic.h"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace manet
{

/**
 * One scenario wired up: engine, medium, mobility-driven link events, one
 * routing agent per node and CBR sources. Run() may be called once.
 *
 * At the end of the run every packet still buffered or in flight is dropped
 * with END, so sent == delivered + dropped holds exactly.
 */
class Simulation
{
  public:
    explicit Simulation(const Scenario& scenario);
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    void Run();

    const Scenario& Config() const
    {
        return m_scenario;
    }

    Simulator& Engine()
    {
        return m_engine;
    }

    Network& Net()
    {
        return *m_network;
    }

    const Mobility& Motion() const
    {
        return m_mobility;
    }

    const std::vector<LinkEvent>& LinkEvents() const
    {
        return m_linkEvents;
    }

    RoutingProtocol& Protocol(NodeId node) const;

    /// Null when the scenario runs the other protocol.
    dsdv::Agent* DsdvAgent(NodeId node) const;
    aodv::Agent* AodvAgent(NodeId node) const;

    const RunAccounting& Accounting() const
    {
        return m_accounting;
    }

    const std::string& TraceText() const
    {
        return m_trace.Text();
    }

    ThroughputSeries Throughput(SimTime binWidth) const;

  private:
    void EmitNext(size_t flowIndex, size_t k);

    Scenario m_scenario;
    Mobility m_mobility;
    std::vector<LinkEvent> m_linkEvents;
    Simulator m_engine;
    TraceWriter m_trace;
    RunAccounting m_accounting;
    std::unique_ptr<Network> m_network;
    std::vector<std::unique_ptr<RoutingProtocol>> m_agents;
    std::vector<std::vector<SimTime>> m_emissions;
    std::vector<uint64_t> m_flowSeq;
    bool m_ran{false};
};

/// A cycle in the next-hop graph toward dest, walking every advertised next
/// hop from every node. Returns the node sequence of the cycle, if any.
std::optional<std::vector<NodeId>> FindForwardingLoop(const Network& network, NodeId dest);

/// Runs a scenario to completion.
std::unique_ptr<Simulation> RunScenario(const Scenario& scenario);

} // namespace manet

#endif
