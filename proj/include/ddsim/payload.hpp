#pragma once

// Payload layouts carried inside ControlMessage between the agents, the CMS,
// the mining center and the firewall. All integers big-endian; reals are
// IEEE-754 doubles so values cross the bus bit-exactly.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ddsim/traffic.hpp"

namespace ddsim::payload {

using Bytes = std::vector<std::uint8_t>;
using traffic::SimPacket;
using traffic::UserId;
using traffic::VmId;

// Alert1/2/3: the agent's view at the tick the level was crossed.
struct Alert {
  VmId vm = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double load = 0.0;
  bool operator==(const Alert&) const = default;
};

// TrafficBuffer (agent → CMS) and PatternRequest (CMS → mining). A capture
// larger than one payload is split into chunk_count consecutive messages.
struct PacketBatch {
  std::uint32_t job_id = 0;  // 0 on the agent leg
  VmId vm = 0;
  std::uint16_t chunk_index = 0;
  std::uint16_t chunk_count = 1;
  std::vector<SimPacket> packets;
  bool operator==(const PacketBatch&) const = default;
};

inline constexpr std::size_t kPacketsPerChunk = 5000;

std::vector<PacketBatch> split_batches(std::uint32_t job_id, VmId vm,
                                       std::span<const SimPacket> packets);

// HighUsersReport from an agent.
struct UsageReport {
  VmId vm = 0;
  std::vector<std::pair<UserId, std::uint64_t>> top;
  bool operator==(const UsageReport&) const = default;
};

// HighUsersReport forwarded by the CMS to the firewall.
struct PreservationList {
  VmId vm = 0;
  std::vector<UserId> registered;
  std::vector<UserId> high_consumers;
  bool operator==(const PreservationList&) const = default;
};

struct PatternResult {
  std::uint32_t job_id = 0;
  VmId vm = 0;
  bool found = false;
  std::uint32_t token = 0;
  double support = 0.0;
  std::vector<UserId> sources;
  bool operator==(const PatternResult&) const = default;
};

struct RuleUpdate {
  std::uint32_t rule_id = 0;
  std::uint32_t token = 0;
  bool operator==(const RuleUpdate&) const = default;
};

// PolicingCommand (CMS → firewall) and BandwidthChangeNotice (firewall → CMS
// → agent). clamp 0 means fully released.
struct Policing {
  VmId vm = 0;
  double target_pct = 0.0;
  double clamp = 0.0;
  bool operator==(const Policing&) const = default;
};

enum class AckDirective : std::uint8_t { kPlain = 0, kRestoreAlpha = 1 };

struct Ack {
  VmId vm = 0;
  AckDirective directive = AckDirective::kPlain;
  bool operator==(const Ack&) const = default;
};

Bytes encode(const Alert& v);
Bytes encode(const PacketBatch& v);
Bytes encode(const UsageReport& v);
Bytes encode(const PreservationList& v);
Bytes encode(const PatternResult& v);
Bytes encode(const RuleUpdate& v);
Bytes encode(const Policing& v);
Bytes encode(const Ack& v);

// Each decoder throws Error(kTruncated | kMalformedPayload).
Alert decode_alert(std::span<const std::uint8_t> b);
PacketBatch decode_batch(std::span<const std::uint8_t> b);
UsageReport decode_usage(std::span<const std::uint8_t> b);
PreservationList decode_preservation(std::span<const std::uint8_t> b);
PatternResult decode_pattern_result(std::span<const std::uint8_t> b);
RuleUpdate decode_rule_update(std::span<const std::uint8_t> b);
Policing decode_policing(std::span<const std::uint8_t> b);
Ack decode_ack(std::span<const std::uint8_t> b);

}  // namespace ddsim::payload
