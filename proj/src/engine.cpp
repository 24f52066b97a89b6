#include "ddsim/engine.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "ddsim/mining.hpp"

namespace ddsim::sim {

using traffic::SimPacket;
using wire::MsgKind;

std::uint32_t node_key(std::uint64_t seed, bus::NodeAddr addr) {
  const std::uint64_t stream =
      0x6b657900ull ^ (static_cast<std::uint64_t>(addr.role) << 40) ^ addr.index;
  return static_cast<std::uint32_t>(traffic::derive_seed(seed, stream));
}

namespace {

// Seed streams per VM: 4v for demand, 4v+1 for arrival interleaving.
constexpr std::uint64_t kDemandStream = 0;
constexpr std::uint64_t kMixStream = 1;

struct VmRuntime {
  VmRuntime(const VmConfig& c, std::uint64_t seed)
      : config(c),
        demand_rng(traffic::derive_seed(seed, 4 * c.id + kDemandStream)),
        mix_rng(traffic::derive_seed(seed, 4 * c.id + kMixStream)),
        firewall(c.id, c.capacity),
        endpoint(bus::firewall_addr(c.id), node_key(seed, bus::firewall_addr(c.id))) {}

  const VmConfig& config;
  traffic::Rng demand_rng;
  traffic::Rng mix_rng;
  firewall::VmFirewall firewall;
  bus::Endpoint endpoint;
  std::optional<agent::Agent> agent;
  std::vector<const traffic::AttackSpec*> attacks;

  // Per-tick scratch.
  std::vector<SimPacket> offered;
  std::vector<SimPacket> passed;
  firewall::EnforcementReport report;
  std::vector<bus::Envelope> outbox;
  agent::StepTrace trace;
};

void run_vm_stages(VmRuntime& vm, Tick now, const firewall::RuleStore& rules) {
  const auto& c = vm.config;
  vm.offered = traffic::generate_tick(c.users, c.id, c.capacity, c.mtu, vm.demand_rng);
  for (const auto* at : vm.attacks) {
    auto burst = traffic::inject_attack(*at, now, c.capacity, c.mtu);
    vm.offered.insert(vm.offered.end(), burst.begin(), burst.end());
  }
  std::shuffle(vm.offered.begin(), vm.offered.end(), vm.mix_rng);

  vm.passed = vm.firewall.enforce(vm.offered, rules, vm.report);

  vm.outbox.clear();
  vm.trace = agent::StepTrace{};
  if (vm.agent) {
    vm.outbox = vm.agent->step(now, vm.passed);
    vm.trace = vm.agent->last_trace();
  }
}

}  // namespace

RunResult run(const ScenarioConfig& config, const RunOptions& options) {
  validate(config);
  RunResult result;

  std::vector<VmRuntime> vms;
  vms.reserve(config.vms.size());
  std::map<VmId, std::size_t> index;
  std::map<bus::NodeAddr, std::uint32_t> keys;
  std::map<VmId, std::vector<traffic::UserId>> registered;
  for (const auto& c : config.vms) {
    index[c.id] = vms.size();
    auto& vm = vms.emplace_back(c, config.seed);
    if (config.agents_enabled) {
      const auto addr = bus::agent_addr(c.id);
      vm.agent.emplace(c.id, c.capacity, config.agent, node_key(config.seed, addr));
      keys[addr] = node_key(config.seed, addr);
    }
    keys[bus::firewall_addr(c.id)] = node_key(config.seed, bus::firewall_addr(c.id));
    for (const auto& u : c.users) {
      if (u.registered) registered[c.id].push_back(u.user_id);
    }
  }
  for (const auto& at : config.attacks) vms[index.at(at.vm_id)].attacks.push_back(&at);
  keys[bus::kMining] = node_key(config.seed, bus::kMining);

  cms::Cms cms(config.cms, node_key(config.seed, bus::kCms), keys, registered);
  mining::MiningCenter mining(config.mining, node_key(config.seed, bus::kMining));
  firewall::RuleStore rules;

  const std::uint64_t loss_seed = traffic::derive_seed(config.seed, 0x6c6f7373ull);
  std::vector<bus::Envelope> in_flight;
  const auto row_count = static_cast<std::size_t>(config.duration) * vms.size();
  result.series.rows.reserve(row_count);
  result.bytes.reserve(row_count);
  result.traces.reserve(row_count);

  for (Tick now = 0; now < config.duration; ++now) {
    std::vector<bus::Envelope> outbox;

    // Deliver everything emitted last tick.
    const std::size_t sent = in_flight.size();
    auto inbox = bus::bus_deliver(std::move(in_flight), config.loss, loss_seed);
    in_flight.clear();
    result.delivered += inbox.size();
    result.lost += sent - inbox.size();

    std::vector<bus::Envelope> cms_inbox;
    for (auto& e : inbox) {
      switch (e.to.role) {
        case wire::SourceId::kControlCenter:
          cms_inbox.push_back(std::move(e));
          break;
        case wire::SourceId::kMiningCenter:
          mining.on_message(e, now);
          break;
        case wire::SourceId::kIdps:
          if (e.msg.kind == MsgKind::kRuleUpdate) {
            rules.add(payload::decode_rule_update(e.msg.payload).token, now);
          }
          break;
        case wire::SourceId::kAgent: {
          auto it = index.find(e.to.index);
          if (it != index.end() && vms[it->second].agent) vms[it->second].agent->on_message(e);
          break;
        }
        case wire::SourceId::kFirewall: {
          auto it = index.find(e.to.index);
          if (it == index.end()) break;
          auto& vm = vms[it->second];
          if (e.msg.kind == MsgKind::kPolicingCommand) {
            const auto cmd = payload::decode_policing(e.msg.payload);
            if (vm.firewall.apply_policy(cmd.target_pct, cmd.clamp)) {
              payload::Policing notice{vm.config.id, vm.firewall.policy().target_pct,
                                       vm.firewall.policy().clamp_fraction};
              outbox.push_back(vm.endpoint.make(bus::kCms, MsgKind::kBandwidthChangeNotice,
                                                payload::encode(notice), now));
            }
          } else if (e.msg.kind == MsgKind::kHighUsersReport) {
            const auto list = payload::decode_preservation(e.msg.payload);
            vm.firewall.set_preservation({list.registered.begin(), list.registered.end()},
                                         {list.high_consumers.begin(), list.high_consumers.end()});
          }
          break;
        }
      }
    }

    // Traffic, enforcement and agents: independent per VM.
    const auto n = static_cast<std::ptrdiff_t>(vms.size());
    if (options.mode == ExecutionMode::kParallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < n; ++i) run_vm_stages(vms[i], now, rules);
    } else {
      for (std::ptrdiff_t i = 0; i < n; ++i) run_vm_stages(vms[i], now, rules);
    }

    for (auto& vm : vms) {
      if (options.observer) {
        options.observer(TickView{now, vm.config.id, vm.offered, vm.passed,
                                  &vm.firewall.policy(), &vm.report});
      }
      outbox.insert(outbox.end(), std::make_move_iterator(vm.outbox.begin()),
                    std::make_move_iterator(vm.outbox.end()));
    }

    for (const auto& e : cms_inbox) {
      auto replies = cms.handle(e, now);
      outbox.insert(outbox.end(), std::make_move_iterator(replies.begin()),
                    std::make_move_iterator(replies.end()));
    }
    auto timed = cms.tick(now);
    outbox.insert(outbox.end(), std::make_move_iterator(timed.begin()),
                  std::make_move_iterator(timed.end()));

    auto verdicts = mining.poll(now);
    outbox.insert(outbox.end(), std::make_move_iterator(verdicts.begin()),
                  std::make_move_iterator(verdicts.end()));

    // Metrics.
    for (const auto& vm : vms) {
      const auto cap = static_cast<double>(vm.config.capacity);
      std::size_t attack_packets = 0;
      for (const auto& p : vm.passed) attack_packets += p.is_attack ? 1 : 0;
      MetricsRow row;
      row.tick = now;
      row.vm = vm.config.id;
      row.offered_pct = 100.0 * static_cast<double>(vm.report.offered_bytes) / cap;
      row.alpha = vm.trace.alpha;
      row.level = static_cast<int>(vm.trace.level);
      row.clamp = vm.report.clamp;
      row.admitted_pct = 100.0 * static_cast<double>(vm.report.passed_bytes) / cap;
      row.attacker_share_pct =
          vm.passed.empty() ? 0.0
                            : 100.0 * static_cast<double>(attack_packets) /
                                  static_cast<double>(vm.passed.size());
      row.blocked = vm.report.blocked_packets;
      result.series.append(row);
      result.bytes.push_back({vm.report.offered_bytes, vm.report.policed_bytes,
                              vm.report.blocked_bytes, vm.report.passed_bytes});
      result.traces.push_back(vm.trace);
    }

    auto& counts = result.series.messages_by_kind.emplace_back();
    counts.fill(0);
    for (const auto& e : outbox) {
      ++counts[static_cast<std::size_t>(e.msg.kind)];
      result.messages.push_back({e.sent_at, e.from, e.to, e.msg.kind, e.stream_seq, e.msg.payload});
    }
    in_flight = std::move(outbox);
  }

  result.cms_events = cms.events();
  result.cms_counters = cms.counters();
  result.rules = rules.rules();
  return result;
}

}  // namespace ddsim::sim
