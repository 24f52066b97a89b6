#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "ddsim/dscp.hpp"

namespace ddsim::traffic {

using UserId = std::uint32_t;
using VmId = std::uint32_t;
using Tick = std::int64_t;
using Rng = std::mt19937_64;

// Legitimate payload tokens are drawn below this bound; attack signatures
// must be at or above it so no legitimate packet can carry one.
inline constexpr std::uint32_t kAttackTokenBase = 0x80000000u;

struct UserProfile {
  UserId user_id = 0;
  bool registered = false;
  double mean_demand = 0.0;    // percent of VM capacity per tick
  double demand_stddev = 0.0;  // percent
};

struct SimPacket {
  UserId user_id = 0;
  VmId vm_id = 0;
  std::uint32_t size = 0;  // bytes
  Dscp dscp = Dscp::kBestEffort;
  bool is_attack = false;  // ground truth; never read by detection logic
  std::uint32_t signature = 0;

  bool operator==(const SimPacket&) const = default;
};

struct AttackSpec {
  VmId vm_id = 0;
  Tick start_tick = 0;
  Tick end_tick = 0;  // exclusive
  std::vector<UserId> attacker_user_ids;
  double aggregate_rate = 0.0;  // percent of VM capacity per tick
  std::uint32_t signature = kAttackTokenBase;
};

using UsageCounters = std::unordered_map<UserId, std::uint64_t>;

// splitmix64 over (master, stream); independent per-VM streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Cuts `bytes` into mtu-sized packets (last one holds the remainder).
// Percent of capacity → bytes, rounded to nearest.
std::uint64_t percent_to_bytes(double percent, std::uint64_t capacity);

// One tick of legitimate demand: per user, Normal(mean, stddev) clipped at 0,
// converted to bytes and chunked. Deterministic given `rng`.
std::vector<SimPacket> generate_tick(std::span<const UserProfile> profiles, VmId vm,
                                     std::uint64_t vm_capacity, std::uint32_t mtu,
                                     Rng& rng);

// Attack packets for `tick`; empty outside [start_tick, end_tick). Bytes are
// spread round-robin over the attackers in mtu-sized packets.
std::vector<SimPacket> inject_attack(const AttackSpec& spec, Tick tick,
                                     std::uint64_t vm_capacity, std::uint32_t mtu);

// The n heaviest users, descending by bytes, ties by ascending id.
std::vector<UserId> top_consumers(const UsageCounters& usage, std::size_t n);

}  // namespace ddsim::traffic
