#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ddsim/agent.hpp"
#include "ddsim/bus.hpp"
#include "ddsim/cms.hpp"
#include "ddsim/config.hpp"
#include "ddsim/firewall.hpp"
#include "ddsim/metrics.hpp"

namespace ddsim::sim {

// kSequential is the reference; kParallel runs the per-VM stages (traffic,
// enforcement, agent step) across OpenMP threads and must produce
// bit-identical results.
enum class ExecutionMode { kSequential, kParallel };

// Everything one VM saw in one tick, handed to an observer after the
// per-VM stages complete. Observers run on the calling thread in VM order.
struct TickView {
  Tick tick = 0;
  VmId vm = 0;
  std::span<const traffic::SimPacket> offered;  // DSCP-marked, arrival order
  std::span<const traffic::SimPacket> passed;
  const firewall::PolicingPolicy* policy = nullptr;
  const firewall::EnforcementReport* report = nullptr;
};

using TickObserver = std::function<void(const TickView&)>;

struct RunOptions {
  ExecutionMode mode = ExecutionMode::kSequential;
  TickObserver observer;
};

struct ByteLedger {
  std::uint64_t offered = 0;
  std::uint64_t policed = 0;
  std::uint64_t blocked = 0;
  std::uint64_t passed = 0;
};

struct MessageRecord {
  Tick sent_at = 0;
  bus::NodeAddr from;
  bus::NodeAddr to;
  wire::MsgKind kind = wire::MsgKind::kAlloha;
  std::uint64_t stream_seq = 0;
  std::vector<std::uint8_t> payload;
};

struct RunResult {
  MetricsSeries series;
  // Parallel to series.rows.
  std::vector<ByteLedger> bytes;
  std::vector<agent::StepTrace> traces;  // unrounded agent view
  std::vector<MessageRecord> messages;   // every emission, in emission order
  std::vector<cms::Event> cms_events;
  cms::CmsCounters cms_counters;
  std::vector<firewall::IdpsRule> rules;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
};

// Runs the whole scenario. Throws ConfigError for an invalid config.
RunResult run(const ScenarioConfig& config, const RunOptions& options = {});

// Shared key of each node, derived from the master seed.
std::uint32_t node_key(std::uint64_t seed, bus::NodeAddr addr);

}  // namespace ddsim::sim
