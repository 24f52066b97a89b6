#include "ddsim/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "ddsim/error.hpp"

namespace ddsim::traffic {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t percent_to_bytes(double percent, std::uint64_t capacity) {
  if (percent <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::llround(percent / 100.0 * static_cast<double>(capacity)));
}

std::vector<SimPacket> generate_tick(std::span<const UserProfile> profiles, VmId vm,
                                     std::uint64_t vm_capacity, std::uint32_t mtu,
                                     Rng& rng) {
  std::vector<SimPacket> out;
  std::uniform_int_distribution<std::uint32_t> token(0, kAttackTokenBase - 1);
  for (const auto& p : profiles) {
    double demand = p.mean_demand;
    if (p.demand_stddev > 0.0) {
      demand = std::normal_distribution<double>(p.mean_demand, p.demand_stddev)(rng);
    }
    const std::uint64_t bytes = percent_to_bytes(std::max(demand, 0.0), vm_capacity);
    SimPacket proto{.user_id = p.user_id, .vm_id = vm};
    std::uint64_t left = bytes;
    while (left > 0) {
      proto.signature = token(rng);
      proto.size = static_cast<std::uint32_t>(std::min<std::uint64_t>(left, mtu));
      out.push_back(proto);
      left -= proto.size;
    }
  }
  return out;
}

std::vector<SimPacket> inject_attack(const AttackSpec& spec, Tick tick,
                                     std::uint64_t vm_capacity, std::uint32_t mtu) {
  std::vector<SimPacket> out;
  if (tick < spec.start_tick || tick >= spec.end_tick || spec.attacker_user_ids.empty()) {
    return out;
  }
  std::uint64_t left = percent_to_bytes(spec.aggregate_rate, vm_capacity);
  out.reserve(static_cast<std::size_t>(left / mtu + 1));
  std::size_t next = 0;
  while (left > 0) {
    SimPacket p{.user_id = spec.attacker_user_ids[next],
                .vm_id = spec.vm_id,
                .size = static_cast<std::uint32_t>(std::min<std::uint64_t>(left, mtu)),
                .is_attack = true,
                .signature = spec.signature};
    out.push_back(p);
    left -= p.size;
    next = (next + 1) % spec.attacker_user_ids.size();
  }
  return out;
}

std::vector<UserId> top_consumers(const UsageCounters& usage, std::size_t n) {
  if (n == 0) throw Error(Errc::kDomainError, "top_consumers needs n >= 1");
  std::vector<std::pair<UserId, std::uint64_t>> rows(usage.begin(), usage.end());
  const auto heavier = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  const std::size_t k = std::min(n, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end(),
                    heavier);
  std::vector<UserId> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(rows[i].first);
  return out;
}

}  // namespace ddsim::traffic
