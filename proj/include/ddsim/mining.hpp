#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ddsim/bus.hpp"
#include "ddsim/payload.hpp"
#include "ddsim/traffic.hpp"

namespace ddsim::mining {

using bus::Envelope;
using traffic::SimPacket;
using traffic::Tick;
using traffic::UserId;
using traffic::VmId;

struct AttackSignature {
  std::uint32_t signature_token = 0;
  std::vector<UserId> source_set;  // ascending
  double support = 0.0;            // share of buffered packets carrying the token

  bool operator==(const AttackSignature&) const = default;
};

// Dominant-token detector: the most frequent signature token (smallest token
// on ties) is reported if its share of the buffer reaches `theta`. Ground
// truth flags are never consulted. Throws EmptyBuffer on an empty input and
// DomainError for theta outside (0,1].
std::optional<AttackSignature> analyze(std::span<const SimPacket> packets, double theta);

struct MiningParams {
  double theta = 0.5;
  Tick latency = 15;  // ticks from job open to verdict
};

struct MiningJob {
  std::uint32_t job_id = 0;
  VmId vm_id = 0;
  std::vector<SimPacket> packets;
  Tick opened_at = 0;
  Tick latency = 0;
  double theta = 0.5;
  std::optional<AttackSignature> verdict;
  bool reported = false;
};

// Nothing before opened_at + latency; then exactly one result (positive or
// negative), after which the job stays silent.
std::optional<payload::PatternResult> job_poll(MiningJob& job, Tick now);

// Receives PatternRequest chunks from the CMS, holds at most one job per VM
// (a newer request replaces the older job) and reports verdicts.
class MiningCenter {
 public:
  MiningCenter(MiningParams params, std::uint32_t auth_key)
      : params_(params), endpoint_(bus::kMining, auth_key) {}

  void on_message(const Envelope& in, Tick now);
  std::vector<Envelope> poll(Tick now);

  const MiningParams& params() const { return params_; }
  const std::map<VmId, MiningJob>& jobs() const { return jobs_; }
  std::uint32_t superseded() const { return superseded_; }

 private:
  struct Assembly {
    std::uint32_t job_id = 0;
    std::uint16_t received = 0;
    std::vector<std::vector<SimPacket>> chunks;
  };

  MiningParams params_;
  bus::Endpoint endpoint_;
  std::map<VmId, Assembly> assembling_;
  std::map<VmId, MiningJob> jobs_;
  std::uint32_t superseded_ = 0;
};

}  // namespace ddsim::mining
