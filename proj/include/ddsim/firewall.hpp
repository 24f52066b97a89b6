#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "ddsim/dscp.hpp"
#include "ddsim/traffic.hpp"

namespace ddsim::firewall {

using traffic::SimPacket;
using traffic::Tick;
using traffic::UserId;
using traffic::VmId;
using UserSet = std::unordered_set<UserId>;

// Registered (accounting service) users keep AF41; CMS-designated heavy
// users get CS7; everyone else is best effort. Registration wins.
Dscp classify_dscp(const SimPacket& packet, const UserSet& registered,
                   const UserSet& high_consumers);

struct PolicingPolicy {
  VmId vm_id = 0;
  double target_pct = 100.0;    // α
  double clamp_fraction = 0.0;  // 1.0 polices to α, 0 admits everything
  std::vector<Dscp> exempt_classes{Dscp::kAF41};
};

// Byte budget for one tick; +infinity when the clamp is fully released.
double policing_budget(const PolicingPolicy& policy, std::uint64_t vm_capacity);

struct PoliceResult {
  std::vector<SimPacket> admitted;  // arrival order preserved
  std::vector<SimPacket> dropped;
  std::uint64_t admitted_bytes = 0;
  std::uint64_t dropped_bytes = 0;
  double achieved_pct = 0.0;
};

// Priority-ordered admission: exempt classes first, then by DSCP precedence,
// arrival order within a class. The first packet that does not fit closes the
// budget, so no packet is dropped while a lower-precedence one gets through.
PoliceResult police(std::span<const SimPacket> packets, const PolicingPolicy& policy,
                    std::uint64_t vm_capacity);

struct IdpsRule {
  std::uint32_t rule_id = 0;
  std::uint32_t signature_token = 0;
  Tick added_at = 0;

  bool operator==(const IdpsRule&) const = default;
};

// Append-only signature store; exact token match.
class RuleStore {
 public:
  // Returns the rule for `token`, adding it if it is new.
  const IdpsRule& add(std::uint32_t token, Tick now);
  bool blocks(std::uint32_t token) const { return tokens_.contains(token); }
  const std::vector<IdpsRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }

 private:
  std::vector<IdpsRule> rules_;
  std::unordered_set<std::uint32_t> tokens_;
};

struct FilterResult {
  std::vector<SimPacket> passed;
  std::vector<SimPacket> blocked;
};

FilterResult idps_filter(std::span<const SimPacket> packets, const RuleStore& rules);
FilterResult idps_filter(std::span<const SimPacket> packets, std::span<const IdpsRule> rules);

// Per-tick accounting for one VM's firewall + IDPS pass.
struct EnforcementReport {
  std::uint64_t offered_bytes = 0;
  std::uint64_t policed_bytes = 0;
  std::uint64_t blocked_bytes = 0;
  std::uint64_t passed_bytes = 0;
  std::uint32_t blocked_packets = 0;
  double clamp = 0.0;
  double target_pct = 100.0;
};

// Per-VM enforcement state: current policing directive and the preservation
// lists pushed by the CMS.
class VmFirewall {
 public:
  VmFirewall(VmId vm, std::uint64_t capacity) : vm_(vm), capacity_(capacity) {}

  VmId vm() const { return vm_; }
  std::uint64_t capacity() const { return capacity_; }

  // Returns true if the effective (target, clamp) changed.
  bool apply_policy(double target_pct, double clamp);
  void set_preservation(UserSet registered, UserSet high);

  const PolicingPolicy& policy() const { return policy_; }
  const UserSet& registered() const { return registered_; }
  const UserSet& high_consumers() const { return high_; }

  // classify (marks `offered` in place) → police → IDPS. Returns the packets
  // delivered to the VM.
  std::vector<SimPacket> enforce(std::span<SimPacket> offered, const RuleStore& rules,
                                 EnforcementReport& report) const;

 private:
  VmId vm_;
  std::uint64_t capacity_;
  PolicingPolicy policy_{.vm_id = 0};
  UserSet registered_;
  UserSet high_;
};

}  // namespace ddsim::firewall
