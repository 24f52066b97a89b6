#include "ddsim/bus.hpp"

#include <algorithm>

#include "ddsim/error.hpp"

namespace ddsim::bus {

Envelope Endpoint::make(NodeAddr to, MsgKind kind, payload::Bytes body, Tick now) {
  Envelope e;
  e.sent_at = now;
  e.from = addr_;
  e.to = to;
  e.stream_seq = next_seq_++;
  e.msg.source = addr_.role;
  e.msg.kind = kind;
  e.msg.seq = static_cast<std::uint16_t>(e.stream_seq);
  e.msg.auth_key = key_;
  e.msg.next_proto = wire::kProtoNone;
  e.msg.payload = std::move(body);
  return e;
}

bool delivery_before(const Envelope& a, const Envelope& b) {
  if (a.from != b.from) return a.from < b.from;
  return a.stream_seq < b.stream_seq;
}

bool is_lost(const Envelope& e, double loss_rate, std::uint64_t seed) {
  if (loss_rate <= 0.0) return false;
  if (loss_rate >= 1.0) return true;
  const std::uint64_t key = (static_cast<std::uint64_t>(e.from.role) << 56) ^
                            (static_cast<std::uint64_t>(e.from.index) << 24) ^ e.stream_seq;
  const std::uint64_t h = traffic::derive_seed(seed, key);
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < loss_rate;
}

std::vector<Envelope> bus_deliver(std::vector<Envelope> outbox, double loss_rate,
                                  std::uint64_t seed) {
  std::stable_sort(outbox.begin(), outbox.end(), delivery_before);
  std::vector<Envelope> inbox;
  inbox.reserve(outbox.size());
  for (auto& e : outbox) {
    if (is_lost(e, loss_rate, seed)) continue;
    try {
      e.msg = wire::decode_header(wire::encode_header(e.msg));
    } catch (const Error&) {
      continue;
    }
    inbox.push_back(std::move(e));
  }
  return inbox;
}

}  // namespace ddsim::bus
