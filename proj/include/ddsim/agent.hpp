#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "ddsim/bus.hpp"
#include "ddsim/predictor.hpp"
#include "ddsim/traffic.hpp"

namespace ddsim::agent {

using bus::Envelope;
using predictor::AlertLevel;
using traffic::SimPacket;
using traffic::Tick;
using traffic::VmId;

struct AgentParams {
  double smoothing = 0.5;              // x
  std::size_t window = 60;             // W, samples kept for σ
  std::size_t warmup = 60;             // samples required before classifying (≥ 2)
  int hysteresis = 5;                  // H, quiet ticks before a level is cleared
  std::size_t buffer_capacity = 10000; // B, packets
  Tick report_period = 30;             // R
  std::size_t report_size = 10;        // n
};

// What the agent saw and decided on one tick.
struct StepTrace {
  double load = 0.0;   // RealLoad, percent
  double alpha = 0.0;  // prediction used for this tick
  double beta = 0.0;
  AlertLevel classified = AlertLevel::kNormal;
  AlertLevel level = AlertLevel::kNormal;  // after hysteresis
};

// Per-VM software agent. Talks only to the CMS.
class Agent {
 public:
  Agent(VmId vm, std::uint64_t capacity, AgentParams params, std::uint32_t auth_key);

  // One tick over the traffic delivered to the VM. Returns messages for the
  // CMS in emission order.
  std::vector<Envelope> step(Tick now, std::span<const SimPacket> packets);

  // Appends to the capture buffer (oldest evicted beyond capacity). No-op
  // while the agent is at Normal.
  void buffer_capture(std::span<const SimPacket> packets);

  // Control traffic from the CMS: α restore, bandwidth-change notices,
  // keepalives.
  void on_message(const Envelope& in);

  VmId vm() const { return vm_; }
  AlertLevel level() const { return level_; }
  const predictor::AgingPredictor& predictor() const { return predictor_; }
  predictor::AgingPredictor& predictor() { return predictor_; }
  const std::deque<SimPacket>& capture_buffer() const { return buffer_; }
  const traffic::UsageCounters& usage() const { return usage_; }
  const StepTrace& last_trace() const { return trace_; }
  const AgentParams& params() const { return params_; }
  std::uint64_t messages_sent() const { return endpoint_.sent(); }

  // True while the firewall reports an active policing clamp on this VM;
  // the alert state is held until the clamp is released.
  bool policed() const { return policed_; }
  std::uint32_t restores() const { return restores_; }
  std::uint32_t failed_restores() const { return failed_restores_; }
  std::uint32_t keepalives() const { return keepalives_; }
  std::uint32_t notices() const { return notices_; }

  // Test hook: force the current level (e.g. to exercise the capture gate).
  void set_level(AlertLevel level) { level_ = level; }

 private:
  Envelope alert(AlertLevel level, Tick now);
  void ship_buffer(Tick now, std::vector<Envelope>& out);

  VmId vm_;
  std::uint64_t capacity_;
  AgentParams params_;
  bus::Endpoint endpoint_;
  predictor::AgingPredictor predictor_;
  AlertLevel level_ = AlertLevel::kNormal;
  int quiet_ticks_ = 0;
  std::deque<SimPacket> buffer_;
  traffic::UsageCounters usage_;
  Tick ticks_seen_ = 0;
  StepTrace trace_;
  bool policed_ = false;
  std::uint32_t restores_ = 0;
  std::uint32_t failed_restores_ = 0;
  std::uint32_t keepalives_ = 0;
  std::uint32_t notices_ = 0;
};

}  // namespace ddsim::agent
