#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "ddsim/payload.hpp"
#include "ddsim/traffic.hpp"
#include "ddsim/wire.hpp"

namespace ddsim::bus {

using traffic::Tick;
using wire::ControlMessage;
using wire::MsgKind;
using wire::SourceId;

// A component instance: its role (the wire source code) plus an index
// (the VM id for agents and firewalls, 0 for singletons).
struct NodeAddr {
  SourceId role = SourceId::kControlCenter;
  std::uint32_t index = 0;

  auto operator<=>(const NodeAddr&) const = default;
};

inline constexpr NodeAddr kCms{SourceId::kControlCenter, 0};
inline constexpr NodeAddr kMining{SourceId::kMiningCenter, 0};
inline constexpr NodeAddr kIdps{SourceId::kIdps, 0};
inline NodeAddr agent_addr(std::uint32_t vm) { return {SourceId::kAgent, vm}; }
inline NodeAddr firewall_addr(std::uint32_t vm) { return {SourceId::kFirewall, vm}; }

struct Envelope {
  Tick sent_at = 0;
  NodeAddr from;
  NodeAddr to;
  // Full-width per-sender counter; msg.seq carries its low 16 bits.
  std::uint64_t stream_seq = 0;
  ControlMessage msg;

  bool operator==(const Envelope&) const = default;
};

// Stamps outgoing messages with the sender's role, sequence and key.
class Endpoint {
 public:
  Endpoint(NodeAddr addr, std::uint32_t auth_key) : addr_(addr), key_(auth_key) {}

  Envelope make(NodeAddr to, MsgKind kind, payload::Bytes body, Tick now);

  NodeAddr addr() const { return addr_; }
  std::uint32_t key() const { return key_; }
  std::uint64_t sent() const { return next_seq_; }

 private:
  NodeAddr addr_;
  std::uint32_t key_;
  std::uint64_t next_seq_ = 0;
};

// Delivery order is (source role, source index, stream_seq).
bool delivery_before(const Envelope& a, const Envelope& b);

// Deterministic per-message loss decision: a seeded hash of the sender and its
// stream position mapped to [0,1) and compared with `loss_rate`.
bool is_lost(const Envelope& e, double loss_rate, std::uint64_t seed);

// Messages emitted at tick t, delivered at t+1: stable-sorted into delivery
// order with lost messages removed. Each surviving message is passed through
// the wire codec, so anything that would not frame is dropped here too.
std::vector<Envelope> bus_deliver(std::vector<Envelope> outbox, double loss_rate = 0.0,
                                  std::uint64_t seed = 0);

}  // namespace ddsim::bus
