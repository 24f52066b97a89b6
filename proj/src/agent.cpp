#include "ddsim/agent.hpp"

#include <algorithm>

#include "ddsim/error.hpp"
#include "ddsim/payload.hpp"

namespace ddsim::agent {

using wire::MsgKind;

Agent::Agent(VmId vm, std::uint64_t capacity, AgentParams params, std::uint32_t auth_key)
    : vm_(vm),
      capacity_(capacity),
      params_(params),
      endpoint_(bus::agent_addr(vm), auth_key),
      predictor_(params.smoothing, params.window) {
  if (capacity == 0) throw Error(Errc::kDomainError, "VM capacity 0");
  params_.warmup = std::max<std::size_t>(params_.warmup, 2);
}

void Agent::buffer_capture(std::span<const SimPacket> packets) {
  if (level_ == AlertLevel::kNormal || params_.buffer_capacity == 0) return;
  for (const auto& p : packets) {
    if (buffer_.size() == params_.buffer_capacity) buffer_.pop_front();
    buffer_.push_back(p);
  }
}

Envelope Agent::alert(AlertLevel level, Tick now) {
  const MsgKind kind = level == AlertLevel::kLevel1   ? MsgKind::kAlert1
                       : level == AlertLevel::kLevel2 ? MsgKind::kAlert2
                                                      : MsgKind::kAlert3;
  payload::Alert body{vm_, trace_.alpha, trace_.beta, trace_.load};
  return endpoint_.make(bus::kCms, kind, payload::encode(body), now);
}

void Agent::ship_buffer(Tick now, std::vector<Envelope>& out) {
  const std::vector<SimPacket> packets(buffer_.begin(), buffer_.end());
  for (const auto& batch : payload::split_batches(0, vm_, packets)) {
    out.push_back(endpoint_.make(bus::kCms, MsgKind::kTrafficBuffer, payload::encode(batch), now));
  }
  buffer_.clear();
}

std::vector<Envelope> Agent::step(Tick now, std::span<const SimPacket> packets) {
  std::vector<Envelope> out;

  std::uint64_t bytes = 0;
  for (const auto& p : packets) {
    bytes += p.size;
    usage_[p.user_id] += p.size;
  }
  const double load =
      std::min(100.0, 100.0 * static_cast<double>(bytes) / static_cast<double>(capacity_));

  trace_ = StepTrace{};
  trace_.load = load;
  if (predictor_.seeded() && predictor_.window().size() >= params_.warmup) {
    trace_.alpha = predictor_.alpha();
    trace_.beta = predictor::compute_beta(trace_.alpha, predictor_.sigma());
    trace_.classified = predictor::classify(load, {trace_.alpha, trace_.beta});
  } else {
    trace_.alpha = predictor_.seeded() ? predictor_.alpha() : load;
  }

  const AlertLevel before = level_;
  if (!policed_) {
    if (trace_.classified > level_) {
      level_ = trace_.classified;
      quiet_ticks_ = 0;
    } else if (trace_.classified < level_) {
      if (++quiet_ticks_ >= params_.hysteresis) {
        level_ = trace_.classified;
        quiet_ticks_ = 0;
      }
    } else {
      quiet_ticks_ = 0;
    }
  }

  if (level_ == AlertLevel::kNormal) {
    buffer_.clear();
  } else {
    buffer_capture(packets);
  }

  // Every level crossed on the way up is reported, in order.
  for (int k = static_cast<int>(before) + 1; k <= static_cast<int>(level_); ++k) {
    const auto crossed = static_cast<AlertLevel>(k);
    if (crossed == AlertLevel::kLevel1) predictor_.snapshot_alpha();
    out.push_back(alert(crossed, now));
    if (crossed == AlertLevel::kLevel2 ||
        (crossed == AlertLevel::kLevel3 && !buffer_.empty())) {
      ship_buffer(now, out);
    }
  }
  trace_.level = level_;

  predictor_.update(load);

  ++ticks_seen_;
  if (params_.report_period > 0 && ticks_seen_ % params_.report_period == 0) {
    payload::UsageReport report{vm_, {}};
    for (auto user : traffic::top_consumers(usage_, params_.report_size)) {
      report.top.emplace_back(user, usage_.at(user));
    }
    if (!report.top.empty()) {
      out.push_back(endpoint_.make(bus::kCms, MsgKind::kHighUsersReport,
                                   payload::encode(report), now));
    }
  }
  return out;
}

void Agent::on_message(const Envelope& in) {
  switch (in.msg.kind) {
    case MsgKind::kAck: {
      const auto ack = payload::decode_ack(in.msg.payload);
      if (ack.directive != payload::AckDirective::kRestoreAlpha) return;
      if (predictor_.has_snapshot()) {
        predictor_.restore_alpha();
        ++restores_;
      } else {
        ++failed_restores_;
      }
      return;
    }
    case MsgKind::kBandwidthChangeNotice: {
      const auto notice = payload::decode_policing(in.msg.payload);
      policed_ = notice.clamp > 0.0;
      ++notices_;
      return;
    }
    case MsgKind::kAlloha:
      ++keepalives_;
      return;
    default:
      return;
  }
}

}  // namespace ddsim::agent
