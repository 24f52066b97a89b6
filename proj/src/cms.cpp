#include "ddsim/cms.hpp"

#include "ddsim/error.hpp"

namespace ddsim::cms {

using wire::MsgKind;

std::string_view event_name(EventType t) {
  switch (t) {
    case EventType::kAlert: return "alert";
    case EventType::kJobOpened: return "job_opened";
    case EventType::kJobSuperseded: return "job_superseded";
    case EventType::kJobExpired: return "job_expired";
    case EventType::kVerdictInTime: return "verdict_in_time";
    case EventType::kVerdictLate: return "verdict_late";
    case EventType::kRuleIssued: return "rule_issued";
    case EventType::kPolicingStarted: return "policing_started";
    case EventType::kReleaseStep: return "release_step";
    case EventType::kPolicingCancelled: return "policing_cancelled";
    case EventType::kAlphaRestore: return "alpha_restore";
  }
  return "?";
}

Cms::Cms(CmsParams params, std::uint32_t auth_key, std::map<NodeAddr, std::uint32_t> keys,
         std::map<VmId, std::vector<UserId>> registered)
    : params_(params),
      endpoint_(bus::kCms, auth_key),
      keys_(std::move(keys)),
      registered_(std::move(registered)) {
  if (params_.release_steps < 1) throw Error(Errc::kDomainError, "release_steps < 1");
}

const VmLedger* Cms::ledger(VmId vm) const {
  auto it = ledgers_.find(vm);
  return it == ledgers_.end() ? nullptr : &it->second;
}

void Cms::log(Tick t, VmId vm, EventType type, double value) {
  events_.push_back({t, vm, type, value});
}

std::vector<Envelope> Cms::handle(const Envelope& in, Tick now) {
  std::vector<Envelope> out;
  ++counters_.inbound;

  auto key = keys_.find(in.from);
  if (key == keys_.end() || !wire::authenticate(in.msg, key->second)) {
    ++counters_.dropped_auth;
    return out;
  }

  try {
    switch (in.msg.kind) {
      case MsgKind::kAlert1:
      case MsgKind::kAlert2:
      case MsgKind::kAlert3:
        on_alert(in, now, out);
        break;
      case MsgKind::kTrafficBuffer:
        on_traffic_buffer(in, now, out);
        break;
      case MsgKind::kPatternResult:
        on_pattern_result(in, now, out);
        break;
      case MsgKind::kHighUsersReport:
        on_usage_report(in, now, out);
        break;
      case MsgKind::kBandwidthChangeNotice:
        on_bandwidth_notice(in, now, out);
        break;
      case MsgKind::kAck:
      case MsgKind::kAlloha:
        break;
      default:
        ++counters_.dropped_unknown;
        return {};
    }
  } catch (const Error&) {
    ++counters_.dropped_malformed;
    return {};
  }
  ++counters_.dispatched;
  ++counters_.by_kind[static_cast<std::size_t>(in.msg.kind)];
  return out;
}

void Cms::on_alert(const Envelope& in, Tick now, std::vector<Envelope>& out) {
  const auto alert = payload::decode_alert(in.msg.payload);
  auto& l = ledger_for(alert.vm);
  const auto level = static_cast<AlertLevel>(static_cast<int>(in.msg.kind));
  l.level = level;
  l.alpha_at_alert = alert.alpha;
  log(now, alert.vm, EventType::kAlert, static_cast<double>(level));

  if (level == AlertLevel::kLevel1) {
    l.snapshot_alpha = alert.alpha;
  } else if (level == AlertLevel::kLevel3) {
    // Police everyone down to the pre-attack prediction; a repeat Level3
    // restarts the release schedule from the full clamp.
    const double target = l.snapshot_alpha.value_or(alert.alpha);
    l.release = ReleaseSchedule{now, target, 0};
    log(now, alert.vm, EventType::kPolicingStarted, target);
    send_policing(alert.vm, target, 1.0, now, out);
  }
}

void Cms::on_traffic_buffer(const Envelope& in, Tick now, std::vector<Envelope>& out) {
  auto batch = payload::decode_batch(in.msg.payload);
  auto& l = ledger_for(batch.vm);
  if (batch.chunk_index == 0 || l.pending_chunks.size() != batch.chunk_count) {
    l.pending_chunks.assign(batch.chunk_count, {});
    l.pending_received = 0;
  }
  l.pending_chunks[batch.chunk_index] = std::move(batch.packets);
  if (++l.pending_received < batch.chunk_count) return;

  std::vector<SimPacket> packets;
  for (auto& c : l.pending_chunks) packets.insert(packets.end(), c.begin(), c.end());
  l.pending_chunks.clear();
  l.pending_received = 0;
  open_job(batch.vm, std::move(packets), now, out);
}

void Cms::open_job(VmId vm, std::vector<SimPacket> packets, Tick now,
                   std::vector<Envelope>& out) {
  auto& l = ledger_for(vm);
  if (l.job) log(now, vm, EventType::kJobSuperseded, l.job->job_id);
  const std::uint32_t id = next_job_id_++;
  l.job = MiningJobRecord{id, now, now + params_.detect_deadline, false};
  log(now, vm, EventType::kJobOpened, id);
  for (const auto& batch : payload::split_batches(id, vm, packets)) {
    out.push_back(endpoint_.make(bus::kMining, MsgKind::kPatternRequest, payload::encode(batch), now));
  }
}

void Cms::send_policing(VmId vm, double target, double clamp, Tick now,
                        std::vector<Envelope>& out) {
  payload::Policing cmd{vm, target, clamp};
  out.push_back(endpoint_.make(bus::firewall_addr(vm), MsgKind::kPolicingCommand,
                               payload::encode(cmd), now));
}

void Cms::on_pattern_result(const Envelope& in, Tick now, std::vector<Envelope>& out) {
  const auto result = payload::decode_pattern_result(in.msg.payload);
  auto& l = ledger_for(result.vm);
  const bool current = l.job && l.job->job_id == result.job_id;
  const bool in_time = current && !l.job->expired;
  if (current) log(now, result.vm, in_time ? EventType::kVerdictInTime : EventType::kVerdictLate,
                   result.found ? 1.0 : 0.0);

  if (result.found && !issued_tokens_.contains(result.token)) {
    issued_tokens_.insert(result.token);
    payload::RuleUpdate rule{next_rule_id_++, result.token};
    out.push_back(endpoint_.make(bus::kIdps, MsgKind::kRuleUpdate, payload::encode(rule), now));
    log(now, result.vm, EventType::kRuleIssued, result.token);
  }

  if (result.found && current) {
    if (in_time && l.release) {
      // Detected within the deadline: the rule replaces policing.
      send_policing(result.vm, l.release->target_pct, 0.0, now, out);
      l.release.reset();
      log(now, result.vm, EventType::kPolicingCancelled);
    }
    payload::Ack restore{result.vm, payload::AckDirective::kRestoreAlpha};
    out.push_back(endpoint_.make(bus::agent_addr(result.vm), MsgKind::kAck,
                                 payload::encode(restore), now));
    log(now, result.vm, EventType::kAlphaRestore);
  }
  if (current) l.job.reset();
}

void Cms::on_usage_report(const Envelope& in, Tick now, std::vector<Envelope>& out) {
  const auto report = payload::decode_usage(in.msg.payload);
  auto& l = ledger_for(report.vm);
  l.high_consumers.clear();
  payload::PreservationList list{report.vm, {}, {}};
  for (const auto& [user, bytes] : report.top) {
    l.high_consumers.insert(user);
    list.high_consumers.push_back(user);
  }
  if (auto it = registered_.find(report.vm); it != registered_.end()) {
    list.registered = it->second;
  }
  out.push_back(endpoint_.make(bus::firewall_addr(report.vm), MsgKind::kHighUsersReport,
                               payload::encode(list), now));
}

void Cms::on_bandwidth_notice(const Envelope& in, Tick now, std::vector<Envelope>& out) {
  const auto notice = payload::decode_policing(in.msg.payload);
  out.push_back(endpoint_.make(bus::agent_addr(notice.vm), MsgKind::kBandwidthChangeNotice,
                               payload::encode(notice), now));
}

std::vector<Envelope> Cms::tick(Tick now) {
  std::vector<Envelope> out;
  for (auto& [vm, l] : ledgers_) {
    if (l.job && !l.job->expired && now >= l.job->deadline) {
      l.job->expired = true;
      log(now, vm, EventType::kJobExpired, l.job->job_id);
    }
    if (l.release) {
      auto& r = *l.release;
      const Tick next = r.started_at + params_.release_step * (r.steps_done + 1);
      if (now >= next) {
        ++r.steps_done;
        const double clamp =
            1.0 - static_cast<double>(r.steps_done) / static_cast<double>(params_.release_steps);
        const double target = r.target_pct;
        log(now, vm, EventType::kReleaseStep, clamp);
        if (r.steps_done >= params_.release_steps) l.release.reset();
        send_policing(vm, target, clamp <= 0.0 ? 0.0 : clamp, now, out);
      }
    }
  }
  if (params_.alloha_interval > 0 && now > 0 && now % params_.alloha_interval == 0) {
    for (const auto& [addr, key] : keys_) {
      if (addr.role == wire::SourceId::kAgent) {
        out.push_back(endpoint_.make(addr, MsgKind::kAlloha, {}, now));
      }
    }
  }
  return out;
}

}  // namespace ddsim::cms
