#pragma once

// Control-plane header carried between the IP and transport layers.
//
//   byte 0     source (3 bits, MSB) | kind (5 bits)
//   bytes 1-2  sequence number, big-endian
//   bytes 3-6  authentication key, big-endian
//   byte 7     next protocol (IANA layer-4 number)
//   bytes 8-9  payload length, big-endian
//   bytes 10-  payload

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ddsim::wire {

enum class SourceId : std::uint8_t {
  kControlCenter = 0b000,
  kFirewall = 0b001,
  kAgent = 0b010,
  kMiningCenter = 0b011,
  kIdps = 0b100,
};

enum class MsgKind : std::uint8_t {
  kAlloha = 0,
  kAlert1 = 1,
  kAlert2 = 2,
  kAlert3 = 3,
  kAck = 4,
  kHighUsersReport = 5,
  kTrafficBuffer = 6,
  kPatternRequest = 7,
  kPatternResult = 8,
  kRuleUpdate = 9,
  kPolicingCommand = 10,
  kBandwidthChangeNotice = 11,
};

inline constexpr std::size_t kHeaderSize = 10;
inline constexpr std::size_t kMaxPayload = 65535;
inline constexpr std::uint8_t kNumSources = 5;
inline constexpr std::uint8_t kNumKinds = 12;

// IANA protocol numbers for next_proto.
inline constexpr std::uint8_t kProtoNone = 0;
inline constexpr std::uint8_t kProtoTcp = 6;
inline constexpr std::uint8_t kProtoUdp = 17;

std::optional<SourceId> source_from_code(std::uint8_t code);
std::optional<MsgKind> kind_from_code(std::uint8_t code);
std::string_view source_name(SourceId s);
std::string_view kind_name(MsgKind k);

struct ControlMessage {
  SourceId source = SourceId::kControlCenter;
  MsgKind kind = MsgKind::kAlloha;
  std::uint16_t seq = 0;
  std::uint32_t auth_key = 0;
  std::uint8_t next_proto = kProtoNone;
  std::vector<std::uint8_t> payload;

  bool operator==(const ControlMessage&) const = default;
};

// Throws Error(kFieldOverflow) if the payload exceeds kMaxPayload or an
// enumerant is out of range.
std::vector<std::uint8_t> encode_header(const ControlMessage& msg);

// Throws Error(kTruncated | kInvalidSource | kInvalidKind). On success
// *consumed (if given) is set to kHeaderSize + payload length.
ControlMessage decode_header(std::span<const std::uint8_t> bytes,
                             std::size_t* consumed = nullptr);

inline bool authenticate(const ControlMessage& msg, std::uint32_t expected_key) {
  return msg.auth_key == expected_key;
}

}  // namespace ddsim::wire
