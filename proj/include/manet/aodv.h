#ifndef MANET_AODV_H
#define MANET_AODV_H

#include "manet/network.h"
#include "manet/packet.h"
#include "manet/simulator.h"

#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace manet::aodv
{

struct Config
{
    SimTime activeRouteTimeout = SimTime::FromSeconds(3.0);
    uint32_t rreqRetries{2};
    SimTime discoveryWait = SimTime::FromSeconds(1.0);
    bool multipath{false};
    bool intermediateRrep{false};
    size_t bufferCapacity{64};
};

inline constexpr uint32_t kInfiniteHops = std::numeric_limits<uint32_t>::max();

struct RoutePath
{
    NodeId nextHop{0};
    uint32_t hops{0};

    bool operator==(const RoutePath&) const = default;
};

/**
 * One destination's route. Single-path mode keeps exactly one path; multipath
 * mode keeps link-disjoint alternates (distinct next hops), each with
 * hops <= advertisedHops. An entry with no paths is broken.
 */
struct RouteEntry
{
    NodeId dest{0};
    uint32_t destSeq{0};
    bool seqValid{true};
    std::vector<RoutePath> paths;
    uint32_t advertisedHops{kInfiniteHops};
    SimTime expiresAt;
    bool valid{false};
    std::set<NodeId> precursors; ///< upstream neighbours that route through us

    bool Broken() const
    {
        return paths.empty();
    }

    bool Usable(SimTime now) const
    {
        return valid && !paths.empty() && now <= expiresAt;
    }

    uint32_t HopCount() const
    {
        return paths.empty() ? kInfiniteHops : paths.front().hops;
    }
};

enum class OfferResult
{
    Installed,
    AddedAlternate,
    Refreshed,
    Rejected,
};

struct Invalidated
{
    NodeId dest{0};
    uint32_t destSeq{0};
    std::set<NodeId> precursors;
    bool wasUsable{false};
};

/**
 * Route table with destination-sequence-number freshness.
 *
 * A route is accepted if its sequence number is newer, or equal and either
 * the entry is broken or (single-path) the hop count is smaller. In multipath
 * mode an equal-sequence route becomes an alternate only if the advertiser's
 * hop count is strictly below this node's advertised hop count; a new
 * sequence number resets the path set.
 */
class RoutingTable
{
  public:
    explicit RoutingTable(bool multipath)
        : m_multipath(multipath)
    {
    }

    bool Multipath() const
    {
        return m_multipath;
    }

    const RouteEntry* Find(NodeId dest) const;
    RouteEntry* Find(NodeId dest);

    const std::map<NodeId, RouteEntry>& Entries() const
    {
        return m_entries;
    }

    /// `neighborHops` is the hop count the advertiser `via` claims for dest.
    OfferResult Offer(NodeId dest,
                      uint32_t seq,
                      NodeId via,
                      uint32_t neighborHops,
                      SimTime expiresAt);

    /// Drops every path through `neighbor`. Entries that lose their last path
    /// become broken with destSeq + 1 and are returned.
    std::vector<Invalidated> RemoveNextHop(NodeId neighbor, SimTime now);

    /// Removes the path to dest via `neighbor`; if none remain the entry is
    /// broken with destSeq = max(destSeq, seq). Returns the invalidation, if any.
    std::optional<Invalidated> RemovePath(NodeId dest, NodeId neighbor, uint32_t seq, SimTime now);

    /// Breaks dest's entry (destSeq + 1) regardless of remaining paths.
    void Break(NodeId dest);

    /// Invalidates entries with now > expiresAt. Sequence numbers and paths
    /// are kept. Returns the number of entries newly invalidated.
    size_t Expire(SimTime now);

    /// Extends a usable entry's lifetime to at least `until`.
    void Refresh(NodeId dest, SimTime until);

  private:
    bool m_multipath;
    std::map<NodeId, RouteEntry> m_entries;
};

class Agent : public RoutingProtocol
{
  public:
    Agent(NodeId self, Network& network, Config config);

    void SendData(Packet packet) override;
    void Receive(Packet packet, NodeId from) override;
    void OnLinkDown(NodeId neighbor) override;
    std::vector<NodeId> NextHops(NodeId dest) const override;
    std::optional<uint32_t> HopCount(NodeId dest) const override;

    const RoutingTable& Table() const
    {
        return m_table;
    }

    uint32_t OwnSeq() const
    {
        return m_ownSeq;
    }

    size_t Buffered(NodeId dest) const;

    bool DiscoveryInProgress(NodeId dest) const
    {
        return m_discoveries.count(dest) > 0;
    }

  private:
    struct Discovery
    {
        uint32_t attempts{0};
        EventHandle timer;
    };

    struct ReplyState
    {
        uint32_t seq{0};
        std::set<NodeId> repliedVia;
    };

    void HandleRreq(const Packet& packet, const Rreq& rreq, NodeId from);
    void HandleRrep(const Packet& packet, const Rrep& rrep, NodeId from);
    void HandleRerr(const Rerr& rerr, NodeId from);
    void HandleData(Packet packet, NodeId from);

    void Enqueue(NodeId dest, Packet packet);
    void StartDiscovery(NodeId dest);
    void SendRreq(NodeId dest);
    void OnDiscoveryTimeout(NodeId dest);
    void FlushBuffer(NodeId dest);
    void SendOnRoute(RouteEntry& entry, Packet packet, bool originated);
    void SendRerrs(const std::vector<Invalidated>& invalidated, std::optional<NodeId> skip);
    void RediscoverIfWaiting(NodeId dest);
    uint32_t AdvertisedHops(NodeId dest, uint32_t seq, uint32_t fallback) const;

    NodeId m_self;
    Network& m_network;
    Config m_config;
    RoutingTable m_table;
    uint32_t m_ownSeq{0};
    uint32_t m_rreqId{0};
    std::set<std::pair<NodeId, uint32_t>> m_seenRreq;
    std::map<std::pair<NodeId, uint32_t>, ReplyState> m_replies;
    std::map<NodeId, std::deque<Packet>> m_buffer;
    std::map<NodeId, Discovery> m_discoveries;
};

} // namespace manet::aodv

#endif
