#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ddsim/agent.hpp"
#include "ddsim/cms.hpp"
#include "ddsim/mining.hpp"
#include "ddsim/traffic.hpp"

namespace ddsim::sim {

using traffic::Tick;
using traffic::VmId;

struct VmConfig {
  VmId id = 0;
  std::uint64_t capacity = 1'500'000;  // bytes per tick
  std::uint32_t mtu = 1500;
  std::vector<traffic::UserProfile> users;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  Tick duration = 600;
  double loss = 0.0;
  bool agents_enabled = true;
  std::vector<VmConfig> vms;
  agent::AgentParams agent;
  mining::MiningParams mining;
  cms::CmsParams cms;
  std::vector<traffic::AttackSpec> attacks;
};

// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& config);

// INI-style text:
//   [scenario]   seed, duration, vm_count, loss, agents
//   [vm]         capacity, mtu, users, registered, user_mean, user_spread,
//                user_stddev (defaults for every VM)
//   [vm.N]       the same keys, overriding VM N
//   [predictor]  smoothing, window, warmup, hysteresis, buffer,
//                report_period, report_size
//   [mining]     theta, latency
//   [cms]        detect_deadline, release_step, release_steps, alloha_interval
//   [attack.ID]  vm, start, end, attackers, rate, signature
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);  // + IoError

// The two reference runs: scenario 1 (verdict inside the deadline) and
// scenario 2 (verdict after it). 10 VMs, 600 s, 40% attack on VM 3 at t=300.
ScenarioConfig canonical_scenario(int which);

// User ids: legitimate users of VM v are v*1000 + 1 ..; attackers of the
// i-th attack section are kAttackerIdBase + i*1000 + 1 ..
inline constexpr traffic::UserId kAttackerIdBase = 1'000'000;

std::vector<traffic::UserProfile> make_users(VmId vm, int count, int registered, double mean,
                                             double spread, double stddev);

}  // namespace ddsim::sim
