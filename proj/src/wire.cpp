#include "ddsim/wire.hpp"

#include <string>

#include "ddsim/bytes.hpp"
#include "ddsim/error.hpp"

namespace ddsim::wire {

std::optional<SourceId> source_from_code(std::uint8_t code) {
  if (code >= kNumSources) return std::nullopt;
  return static_cast<SourceId>(code);
}

std::optional<MsgKind> kind_from_code(std::uint8_t code) {
  if (code >= kNumKinds) return std::nullopt;
  return static_cast<MsgKind>(code);
}

std::string_view source_name(SourceId s) {
  switch (s) {
    case SourceId::kControlCenter: return "ControlCenter";
    case SourceId::kFirewall: return "Firewall";
    case SourceId::kAgent: return "Agent";
    case SourceId::kMiningCenter: return "MiningCenter";
    case SourceId::kIdps: return "Idps";
  }
  return "?";
}

std::string_view kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::kAlloha: return "Alloha";
    case MsgKind::kAlert1: return "Alert1";
    case MsgKind::kAlert2: return "Alert2";
    case MsgKind::kAlert3: return "Alert3";
    case MsgKind::kAck: return "Ack";
    case MsgKind::kHighUsersReport: return "HighUsersReport";
    case MsgKind::kTrafficBuffer: return "TrafficBuffer";
    case MsgKind::kPatternRequest: return "PatternRequest";
    case MsgKind::kPatternResult: return "PatternResult";
    case MsgKind::kRuleUpdate: return "RuleUpdate";
    case MsgKind::kPolicingCommand: return "PolicingCommand";
    case MsgKind::kBandwidthChangeNotice: return "BandwidthChangeNotice";
  }
  return "?";
}

std::vector<std::uint8_t> encode_header(const ControlMessage& msg) {
  const auto src = static_cast<std::uint8_t>(msg.source);
  const auto kind = static_cast<std::uint8_t>(msg.kind);
  if (src >= kNumSources) {
    throw Error(Errc::kFieldOverflow, "source code " + std::to_string(src));
  }
  if (kind >= kNumKinds) {
    throw Error(Errc::kFieldOverflow, "kind code " + std::to_string(kind));
  }
  if (msg.payload.size() > kMaxPayload) {
    throw Error(Errc::kFieldOverflow,
                "payload of " + std::to_string(msg.payload.size()) + " bytes");
  }

  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + msg.payload.size());
  ByteWriter w(out);
  w.u8(static_cast<std::uint8_t>((src << 5) | kind));
  w.u16(msg.seq);
  w.u32(msg.auth_key);
  w.u8(msg.next_proto);
  w.u16(static_cast<std::uint16_t>(msg.payload.size()));
  w.bytes(msg.payload);
  return out;
}

ControlMessage decode_header(std::span<const std::uint8_t> bytes, std::size_t* consumed) {
  if (bytes.size() < kHeaderSize) {
    throw Error(Errc::kTruncated,
                "header needs 10 bytes, got " + std::to_string(bytes.size()));
  }
  ByteReader r(bytes);
  const std::uint8_t b0 = r.u8();
  auto src = source_from_code(b0 >> 5);
  if (!src) throw Error(Errc::kInvalidSource, "code " + std::to_string(b0 >> 5));
  auto kind = kind_from_code(b0 & 0x1f);
  if (!kind) throw Error(Errc::kInvalidKind, "code " + std::to_string(b0 & 0x1f));

  ControlMessage msg;
  msg.source = *src;
  msg.kind = *kind;
  msg.seq = r.u16();
  msg.auth_key = r.u32();
  msg.next_proto = r.u8();
  const std::uint16_t len = r.u16();
  auto body = r.bytes(len);
  msg.payload.assign(body.begin(), body.end());
  if (consumed) *consumed = r.position();
  return msg;
}

}  // namespace ddsim::wire
