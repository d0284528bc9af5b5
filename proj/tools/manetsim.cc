// manetsim: run, validate and compare MANET routing scenarios.

#include "manet/plot_data.h"
#include "manet/report.h"
#include "manet/scenario.h"
#include "manet/simulation.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace manet;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitScenario = 2;

struct Output
{
    fs::path path;
    std::string content;
};

/// Writes every file to a temporary name first, then renames them all.
void
WriteAll(const fs::path& dir, const std::vector<Output>& outputs)
{
    fs::create_directories(dir);
    std::vector<fs::path> temps;
    try
    {
        for (const auto& o : outputs)
        {
            fs::path tmp = o.path;
            tmp += ".tmp";
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << o.content;
            out.close();
            if (!out)
            {
                throw std::runtime_error("cannot write " + tmp.string());
            }
            temps.push_back(tmp);
        }
        for (size_t i = 0; i < outputs.size(); ++i)
        {
            fs::rename(temps[i], outputs[i].path);
        }
    }
    catch (...)
    {
        std::error_code ec;
        for (const auto& t : temps)
        {
            fs::remove(t, ec);
        }
        throw;
    }
}

Scenario
LoadWithOverrides(const std::string& path, const std::vector<std::string>& overrides)
{
    Scenario s = LoadScenarioFile(path);
    for (const auto& kv : overrides)
    {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
        {
            throw ScenarioError(ScenarioErrorKind::SyntaxError, 0, "override '" + kv + "' is not key=value");
        }
        ApplyOverride(s, std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
    }
    return s;
}

SimTime
BinWidth(double seconds)
{
    SimTime w = SimTime::FromSeconds(seconds);
    if (!(seconds > 0.0) || w.Micros() <= 0)
    {
        throw ScenarioError(ScenarioErrorKind::BadParameter, 0, "--bin-width must be > 0");
    }
    return w;
}

int
CmdRun(const std::string& scn, const std::string& outDir, const std::vector<std::string>& overrides, double binWidth)
{
    Scenario s = LoadWithOverrides(scn, overrides);
    SimTime w = BinWidth(binWidth);
    auto sim = RunScenario(s);
    std::string stem = fs::path(scn).stem().string();
    fs::path dir(outDir);
    WriteAll(dir,
             {{dir / (stem + ".tr"), sim->TraceText()},
              {dir / (stem + ".dat"), EmitPlotData(sim->Throughput(w))},
              {dir / (stem + ".sum"), RenderSummaryKeyValues(s, sim->Accounting().Summary())}});
    std::cout << RenderSummaryTable(s, sim->Accounting().Summary());
    return kExitOk;
}

int
CmdValidate(const std::string& scn)
{
    Scenario s = LoadScenarioFile(scn);
    Mobility mobility(s.nodes);
    auto events = mobility.ConnectivityEvents(s.radioRange, s.duration);
    auto plural = [](size_t n, const char* word) {
        return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
    };
    std::cout << plural(s.nodes.size(), "node") << ", " << plural(s.flows.size(), "flow") << ", "
              << plural(events.size(), "link event") << "\n";
    return kExitOk;
}

int
CmdCompare(const std::string& a, const std::string& b, const std::string& outDir, double binWidth)
{
    SimTime w = BinWidth(binWidth);
    auto load = [](const std::string& path, const char* side) {
        try
        {
            return LoadScenarioFile(path);
        }
        catch (const ScenarioError& e)
        {
            throw ScenarioError(e.kind(), e.line(), std::string("scenario ") + side + ": " + e.what());
        }
    };
    Scenario sa = load(a, "A");
    Scenario sb = load(b, "B");

    auto futureA = std::async(std::launch::async, [&sa] { return RunScenario(sa); });
    auto futureB = std::async(std::launch::async, [&sb] { return RunScenario(sb); });
    auto simA = futureA.get();
    auto simB = futureB.get();

    std::string stemA = fs::path(a).stem().string();
    std::string stemB = fs::path(b).stem().string();
    std::string labelA = stemA;
    std::string labelB = stemB == stemA ? stemB + "_b" : stemB;
    const auto& sumA = simA->Accounting().Summary();
    const auto& sumB = simB->Accounting().Summary();
    fs::path dir(outDir);
    std::string base = stemA + "_vs_" + stemB;
    WriteAll(dir,
             {{dir / (base + ".dat"),
               EmitComparePlotData(simA->Throughput(w), simB->Throughput(w), labelA, labelB)},
              {dir / (base + ".sum"), RenderComparisonKeyValues(labelA, sumA, labelB, sumB)}});
    std::cout << RenderComparison(labelA, sumA, labelB, sumB);
    return kExitOk;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"MANET routing simulator (DSDV, AODV, multipath AODV)"};
    app.require_subcommand(1);
    double binWidth = 1.0;
    app.add_option("--bin-width", binWidth, "throughput bin width in seconds")->capture_default_str();

    std::string runScn;
    std::string runOut = ".";
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "run a scenario and write .tr, .dat and .sum");
    run->add_option("scenario", runScn)->required();
    run->add_option("-o,--out", runOut, "output directory")->capture_default_str();
    run->add_option("--set", overrides, "override key=value (protocol, seed, duration, param keys)");
    run->add_option("--bin-width", binWidth, "throughput bin width in seconds");

    std::string valScn;
    auto* validate = app.add_subcommand("validate", "parse and dry-check a scenario");
    validate->add_option("scenario", valScn)->required();

    std::string cmpA;
    std::string cmpB;
    std::string cmpOut = ".";
    auto* compare = app.add_subcommand("compare", "run two scenarios and write overlaid plot data");
    compare->add_option("a", cmpA)->required();
    compare->add_option("b", cmpB)->required();
    compare->add_option("-o,--out", cmpOut, "output directory")->capture_default_str();
    compare->add_option("--bin-width", binWidth, "throughput bin width in seconds");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitScenario;
    }

    try
    {
        if (*run)
        {
            return CmdRun(runScn, runOut, overrides, binWidth);
        }
        if (*validate)
        {
            return CmdValidate(valScn);
        }
        return CmdCompare(cmpA, cmpB, cmpOut, binWidth);
    }
    catch (const ScenarioError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScenario;
    }
    catch (const std::exception& e)
    {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
