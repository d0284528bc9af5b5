#ifndef MANET_PACKET_H
#define MANET_PACKET_H

#include "manet/mobility.h"
#include "manet/sim_time.h"

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace manet
{

enum class PacketKind : uint8_t
{
    Cbr,
    Rreq,
    Rrep,
    Rerr,
    Dsdv,
};

std::string_view ToString(PacketKind kind);
std::optional<PacketKind> ParsePacketKind(std::string_view s);

struct DataPacket
{
    uint32_t flowId{0};
    uint64_t seqNo{0};
    NodeId src{0};
    NodeId dst{0};
    uint32_t size{0}; ///< bytes
    SimTime sentAt;
    uint32_t hopsTraversed{0};
};

namespace dsdv
{

inline constexpr uint32_t kInfiniteMetric = std::numeric_limits<uint32_t>::max();

struct AdvertisedRoute
{
    NodeId dest{0};
    uint32_t metric{0};
    uint32_t destSeq{0};

    bool operator==(const AdvertisedRoute&) const = default;
};

enum class UpdateKind : uint8_t
{
    Full,
    Incremental,
};

struct Update
{
    NodeId origin{0};
    UpdateKind kind{UpdateKind::Full};
    std::vector<AdvertisedRoute> entries;
};

} // namespace dsdv

namespace aodv
{

struct Rreq
{
    NodeId origin{0};
    uint32_t originSeq{0};
    uint32_t rreqId{0};
    NodeId dest{0};
    std::optional<uint32_t> destSeqKnown;
    uint32_t hopCount{0};
    uint32_t ttl{0};
};

struct Rrep
{
    NodeId dest{0};
    uint32_t destSeq{0};
    uint32_t hopCount{0};
    NodeId origin{0};
    SimTime lifetime;
};

struct Unreachable
{
    NodeId dest{0};
    uint32_t destSeq{0};
};

struct Rerr
{
    std::vector<Unreachable> unreachable;
};

} // namespace aodv

using PacketBody = std::variant<DataPacket, dsdv::Update, aodv::Rreq, aodv::Rrep, aodv::Rerr>;

/// A frame on the air: unique id, size on the wire, and the payload.
struct Packet
{
    uint64_t id{0};
    uint32_t size{0};
    PacketBody body;

    PacketKind Kind() const;

    bool IsData() const
    {
        return std::holds_alternative<DataPacket>(body);
    }
};

/// Wire sizes for control packets, in bytes.
inline constexpr uint32_t kRreqSize = 24;
inline constexpr uint32_t kRrepSize = 20;
uint32_t RerrSize(size_t entries);
uint32_t DsdvUpdateSize(size_t entries);

} // namespace manet

#endif
