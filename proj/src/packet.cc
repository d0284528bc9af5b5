#include "manet/packet.h"

namespace manet
{

std::string_view
ToString(PacketKind kind)
{
    switch (kind)
    {
    case PacketKind::Cbr:
        return "cbr";
    case PacketKind::Rreq:
        return "rreq";
    case PacketKind::Rrep:
        return "rrep";
    case PacketKind::Rerr:
        return "rerr";
    case PacketKind::Dsdv:
        return "dsdv";
    }
    return "?";
}

std::optional<PacketKind>
ParsePacketKind(std::string_view s)
{
    for (auto k :
         {PacketKind::Cbr, PacketKind::Rreq, PacketKind::Rrep, PacketKind::Rerr, PacketKind::Dsdv})
    {
        if (ToString(k) == s)
        {
            return k;
        }
    }
    return std::nullopt;
}

PacketKind
Packet::Kind() const
{
    struct
    {
        PacketKind operator()(const DataPacket&) const { return PacketKind::Cbr; }
        PacketKind operator()(const dsdv::Update&) const { return PacketKind::Dsdv; }
        PacketKind operator()(const aodv::Rreq&) const { return PacketKind::Rreq; }
        PacketKind operator()(const aodv::Rrep&) const { return PacketKind::Rrep; }
        PacketKind operator()(const aodv::Rerr&) const { return PacketKind::Rerr; }
    } kindOf;
    return std::visit(kindOf, body);
}

uint32_t
RerrSize(size_t entries)
{
    return static_cast<uint32_t>(4 + 8 * entries);
}

uint32_t
DsdvUpdateSize(size_t entries)
{
    return static_cast<uint32_t>(8 + 12 * entries);
}

} // namespace manet
