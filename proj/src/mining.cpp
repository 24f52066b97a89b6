#include "ddsim/mining.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>

#include "ddsim/error.hpp"

namespace ddsim::mining {

std::optional<AttackSignature> analyze(std::span<const SimPacket> packets, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw Error(Errc::kDomainError, "theta " + std::to_string(theta));
  }
  if (packets.empty()) throw Error(Errc::kEmptyBuffer, "nothing to analyze");

  std::unordered_map<std::uint32_t, std::size_t> counts;
  for (const auto& p : packets) ++counts[p.signature];

  std::uint32_t best_token = 0;
  std::size_t best = 0;
  for (const auto& [token, n] : counts) {
    if (n > best || (n == best && token < best_token)) {
      best = n;
      best_token = token;
    }
  }
  const double support = static_cast<double>(best) / static_cast<double>(packets.size());
  if (support < theta) return std::nullopt;

  std::set<UserId> sources;
  for (const auto& p : packets) {
    if (p.signature == best_token) sources.insert(p.user_id);
  }
  return AttackSignature{best_token, {sources.begin(), sources.end()}, support};
}

std::optional<payload::PatternResult> job_poll(MiningJob& job, Tick now) {
  if (job.reported || now < job.opened_at + job.latency) return std::nullopt;
  if (!job.packets.empty()) job.verdict = analyze(job.packets, job.theta);
  job.reported = true;

  payload::PatternResult r;
  r.job_id = job.job_id;
  r.vm = job.vm_id;
  if (job.verdict) {
    r.found = true;
    r.token = job.verdict->signature_token;
    r.support = job.verdict->support;
    r.sources = job.verdict->source_set;
  }
  return r;
}

void MiningCenter::on_message(const Envelope& in, Tick now) {
  if (in.msg.kind != wire::MsgKind::kPatternRequest) return;
  auto batch = payload::decode_batch(in.msg.payload);

  auto& a = assembling_[batch.vm];
  if (a.job_id != batch.job_id || a.chunks.size() != batch.chunk_count) {
    a = Assembly{batch.job_id, 0, std::vector<std::vector<SimPacket>>(batch.chunk_count)};
  }
  auto& slot = a.chunks[batch.chunk_index];
  if (slot.empty() && !batch.packets.empty()) {
    slot = std::move(batch.packets);
  }
  if (++a.received < batch.chunk_count) return;

  MiningJob job;
  job.job_id = a.job_id;
  job.vm_id = batch.vm;
  job.opened_at = now;
  job.latency = params_.latency;
  job.theta = params_.theta;
  for (auto& c : a.chunks) job.packets.insert(job.packets.end(), c.begin(), c.end());
  assembling_.erase(batch.vm);

  auto [it, inserted] = jobs_.try_emplace(job.vm_id);
  if (!inserted && !it->second.reported) ++superseded_;
  it->second = std::move(job);
}

std::vector<Envelope> MiningCenter::poll(Tick now) {
  std::vector<Envelope> out;
  for (auto& [vm, job] : jobs_) {
    if (auto result = job_poll(job, now)) {
      out.push_back(endpoint_.make(bus::kCms, wire::MsgKind::kPatternResult,
                                   payload::encode(*result), now));
    }
  }
  return out;
}

}  // namespace ddsim::mining
