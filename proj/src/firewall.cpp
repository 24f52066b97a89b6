#include "ddsim/firewall.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace ddsim::firewall {

Dscp classify_dscp(const SimPacket& packet, const UserSet& registered,
                   const UserSet& high_consumers) {
  if (registered.contains(packet.user_id)) return Dscp::kAF41;
  if (high_consumers.contains(packet.user_id)) return Dscp::kCS7;
  return Dscp::kBestEffort;
}

double policing_budget(const PolicingPolicy& policy, std::uint64_t vm_capacity) {
  if (policy.clamp_fraction <= 0.0) return std::numeric_limits<double>::infinity();
  const double pct =
      policy.target_pct + (100.0 - policy.target_pct) * (1.0 - policy.clamp_fraction);
  return static_cast<double>(vm_capacity) * pct / 100.0;
}

namespace {

constexpr int kExemptRank = 14;
constexpr int kNumRanks = 15;

int admission_rank(Dscp d, std::span<const Dscp> exempt) {
  if (std::find(exempt.begin(), exempt.end(), d) != exempt.end()) return kExemptRank;
  return dscp_precedence(d);
}

}  // namespace

PoliceResult police(std::span<const SimPacket> packets, const PolicingPolicy& policy,
                    std::uint64_t vm_capacity) {
  PoliceResult out;
  const double budget = policing_budget(policy, vm_capacity);

  // Bucket packet indices by rank, keeping arrival order inside each bucket.
  std::array<std::vector<std::uint32_t>, kNumRanks> buckets;
  for (std::uint32_t i = 0; i < packets.size(); ++i) {
    buckets[admission_rank(packets[i].dscp, policy.exempt_classes)].push_back(i);
  }

  std::vector<bool> admit(packets.size(), false);
  double used = 0.0;
  bool closed = false;
  for (int rank = kNumRanks - 1; rank >= 0 && !closed; --rank) {
    for (std::uint32_t idx : buckets[rank]) {
      const double size = packets[idx].size;
      if (used + size > budget) {
        closed = true;
        break;
      }
      used += size;
      admit[idx] = true;
    }
  }

  for (std::size_t i = 0; i < packets.size(); ++i) {
    if (admit[i]) {
      out.admitted.push_back(packets[i]);
      out.admitted_bytes += packets[i].size;
    } else {
      out.dropped.push_back(packets[i]);
      out.dropped_bytes += packets[i].size;
    }
  }
  out.achieved_pct =
      vm_capacity ? 100.0 * static_cast<double>(out.admitted_bytes) / static_cast<double>(vm_capacity)
                  : 0.0;
  return out;
}

const IdpsRule& RuleStore::add(std::uint32_t token, Tick now) {
  if (tokens_.contains(token)) {
    return *std::find_if(rules_.begin(), rules_.end(),
                         [token](const IdpsRule& r) { return r.signature_token == token; });
  }
  tokens_.insert(token);
  rules_.push_back({static_cast<std::uint32_t>(rules_.size() + 1), token, now});
  return rules_.back();
}

FilterResult idps_filter(std::span<const SimPacket> packets, const RuleStore& rules) {
  FilterResult out;
  for (const auto& p : packets) {
    (rules.blocks(p.signature) ? out.blocked : out.passed).push_back(p);
  }
  return out;
}

FilterResult idps_filter(std::span<const SimPacket> packets, std::span<const IdpsRule> rules) {
  RuleStore store;
  for (const auto& r : rules) store.add(r.signature_token, r.added_at);
  return idps_filter(packets, store);
}

bool VmFirewall::apply_policy(double target_pct, double clamp) {
  clamp = std::clamp(clamp, 0.0, 1.0);
  const bool changed = policy_.target_pct != target_pct || policy_.clamp_fraction != clamp;
  policy_.vm_id = vm_;
  policy_.target_pct = target_pct;
  policy_.clamp_fraction = clamp;
  return changed;
}

void VmFirewall::set_preservation(UserSet registered, UserSet high) {
  registered_ = std::move(registered);
  high_ = std::move(high);
}

std::vector<SimPacket> VmFirewall::enforce(std::span<SimPacket> offered,
                                           const RuleStore& rules,
                                           EnforcementReport& report) const {
  report = EnforcementReport{};
  report.clamp = policy_.clamp_fraction;
  report.target_pct = policy_.target_pct;
  for (auto& p : offered) {
    p.dscp = classify_dscp(p, registered_, high_);
    report.offered_bytes += p.size;
  }

  PoliceResult policed = police(offered, policy_, capacity_);
  report.policed_bytes = policed.dropped_bytes;

  std::vector<SimPacket> passed;
  passed.reserve(policed.admitted.size());
  for (auto& p : policed.admitted) {
    if (rules.blocks(p.signature)) {
      report.blocked_bytes += p.size;
      ++report.blocked_packets;
    } else {
      report.passed_bytes += p.size;
      passed.push_back(p);
    }
  }
  return passed;
}

}  // namespace ddsim::firewall
