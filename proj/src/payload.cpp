#include "ddsim/payload.hpp"

#include <algorithm>
#include <string>

#include "ddsim/bytes.hpp"
#include "ddsim/error.hpp"

namespace ddsim::payload {

namespace {

void expect_end(const ByteReader& r, const char* what) {
  if (r.remaining() != 0) {
    throw Error(Errc::kMalformedPayload,
                std::string(what) + ": " + std::to_string(r.remaining()) + " trailing bytes");
  }
}

void put_users(ByteWriter& w, const std::vector<UserId>& users) {
  w.u16(static_cast<std::uint16_t>(users.size()));
  for (UserId u : users) w.u32(u);
}

std::vector<UserId> get_users(ByteReader& r) {
  std::vector<UserId> users(r.u16());
  for (auto& u : users) u = r.u32();
  return users;
}

void check_count(std::size_t n, const char* what) {
  if (n > 0xffff) {
    throw Error(Errc::kFieldOverflow, std::string(what) + " count " + std::to_string(n));
  }
}

}  // namespace

std::vector<PacketBatch> split_batches(std::uint32_t job_id, VmId vm,
                                       std::span<const SimPacket> packets) {
  const std::size_t chunks =
      std::max<std::size_t>(1, (packets.size() + kPacketsPerChunk - 1) / kPacketsPerChunk);
  check_count(chunks, "chunk");
  std::vector<PacketBatch> out(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    auto& b = out[c];
    b.job_id = job_id;
    b.vm = vm;
    b.chunk_index = static_cast<std::uint16_t>(c);
    b.chunk_count = static_cast<std::uint16_t>(chunks);
    const std::size_t lo = c * kPacketsPerChunk;
    const std::size_t hi = std::min(packets.size(), lo + kPacketsPerChunk);
    if (lo < hi) b.packets.assign(packets.begin() + lo, packets.begin() + hi);
  }
  return out;
}

Bytes encode(const Alert& v) {
  Bytes out;
  ByteWriter w(out);
  w.u32(v.vm);
  w.f64(v.alpha);
  w.f64(v.beta);
  w.f64(v.load);
  return out;
}

Alert decode_alert(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  Alert v;
  v.vm = r.u32();
  v.alpha = r.f64();
  v.beta = r.f64();
  v.load = r.f64();
  expect_end(r, "alert");
  return v;
}

Bytes encode(const PacketBatch& v) {
  check_count(v.packets.size(), "packet");
  Bytes out;
  out.reserve(14 + 13 * v.packets.size());
  ByteWriter w(out);
  w.u32(v.job_id);
  w.u32(v.vm);
  w.u16(v.chunk_index);
  w.u16(v.chunk_count);
  w.u16(static_cast<std::uint16_t>(v.packets.size()));
  for (const auto& p : v.packets) {
    w.u32(p.user_id);
    w.u32(p.size);
    w.u32(p.signature);
    w.u8(static_cast<std::uint8_t>(p.dscp));
  }
  return out;
}

PacketBatch decode_batch(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  PacketBatch v;
  v.job_id = r.u32();
  v.vm = r.u32();
  v.chunk_index = r.u16();
  v.chunk_count = r.u16();
  if (v.chunk_count == 0 || v.chunk_index >= v.chunk_count) {
    throw Error(Errc::kMalformedPayload, "chunk " + std::to_string(v.chunk_index) + "/" +
                                             std::to_string(v.chunk_count));
  }
  v.packets.resize(r.u16());
  for (auto& p : v.packets) {
    p.user_id = r.u32();
    p.vm_id = v.vm;
    p.size = r.u32();
    p.signature = r.u32();
    auto dscp = dscp_from_code(r.u8());
    if (!dscp) throw Error(Errc::kMalformedPayload, "unknown DSCP in packet record");
    p.dscp = *dscp;
  }
  expect_end(r, "packet batch");
  return v;
}

Bytes encode(const UsageReport& v) {
  check_count(v.top.size(), "user");
  Bytes out;
  ByteWriter w(out);
  w.u32(v.vm);
  w.u16(static_cast<std::uint16_t>(v.top.size()));
  for (const auto& [user, bytes] : v.top) {
    w.u32(user);
    w.u64(bytes);
  }
  return out;
}

UsageReport decode_usage(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  UsageReport v;
  v.vm = r.u32();
  v.top.resize(r.u16());
  for (auto& [user, bytes] : v.top) {
    user = r.u32();
    bytes = r.u64();
  }
  expect_end(r, "usage report");
  return v;
}

Bytes encode(const PreservationList& v) {
  check_count(v.registered.size(), "registered");
  check_count(v.high_consumers.size(), "high-consumer");
  Bytes out;
  ByteWriter w(out);
  w.u32(v.vm);
  put_users(w, v.registered);
  put_users(w, v.high_consumers);
  return out;
}

PreservationList decode_preservation(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  PreservationList v;
  v.vm = r.u32();
  v.registered = get_users(r);
  v.high_consumers = get_users(r);
  expect_end(r, "preservation list");
  return v;
}

Bytes encode(const PatternResult& v) {
  check_count(v.sources.size(), "source");
  Bytes out;
  ByteWriter w(out);
  w.u32(v.job_id);
  w.u32(v.vm);
  w.u8(v.found ? 1 : 0);
  w.u32(v.token);
  w.f64(v.support);
  put_users(w, v.sources);
  return out;
}

PatternResult decode_pattern_result(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  PatternResult v;
  v.job_id = r.u32();
  v.vm = r.u32();
  const std::uint8_t found = r.u8();
  if (found > 1) throw Error(Errc::kMalformedPayload, "found flag");
  v.found = found == 1;
  v.token = r.u32();
  v.support = r.f64();
  v.sources = get_users(r);
  expect_end(r, "pattern result");
  return v;
}

Bytes encode(const RuleUpdate& v) {
  Bytes out;
  ByteWriter w(out);
  w.u32(v.rule_id);
  w.u32(v.token);
  return out;
}

RuleUpdate decode_rule_update(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  RuleUpdate v;
  v.rule_id = r.u32();
  v.token = r.u32();
  expect_end(r, "rule update");
  return v;
}

Bytes encode(const Policing& v) {
  Bytes out;
  ByteWriter w(out);
  w.u32(v.vm);
  w.f64(v.target_pct);
  w.f64(v.clamp);
  return out;
}

Policing decode_policing(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  Policing v;
  v.vm = r.u32();
  v.target_pct = r.f64();
  v.clamp = r.f64();
  expect_end(r, "policing");
  return v;
}

Bytes encode(const Ack& v) {
  Bytes out;
  ByteWriter w(out);
  w.u32(v.vm);
  w.u8(static_cast<std::uint8_t>(v.directive));
  return out;
}

Ack decode_ack(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  Ack v;
  v.vm = r.u32();
  const std::uint8_t d = r.u8();
  if (d > 1) throw Error(Errc::kMalformedPayload, "ack directive " + std::to_string(d));
  v.directive = static_cast<AckDirective>(d);
  expect_end(r, "ack");
  return v;
}

}  // namespace ddsim::payload
