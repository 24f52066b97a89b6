// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <bitset>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "ddsim/config.hpp"
#include "ddsim/dscp.hpp"
#include "ddsim/engine.hpp"
#include "ddsim/error.hpp"
#include "ddsim/predictor.hpp"
#include "ddsim/wire.hpp"
#include "oracles.hpp"

using namespace ddsim;
using sim::RunResult;
using traffic::Tick;
using traffic::VmId;
using wire::MsgKind;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
};

using Clock = std::chrono::steady_clock;

bool report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.require(false, "runtime " + std::to_string(secs) + " s over limit");
  }
  std::printf("[%s] criterion %d: %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title, secs,
              o.detail.empty() ? "" : " -- ", o.detail.c_str());
  return o.ok;
}

std::string csv_of(const RunResult& r) {
  std::ostringstream out;
  sim::write_csv(r.series, out);
  return out.str();
}

constexpr VmId kAttackedVm = 3;

std::size_t row_index(const sim::ScenarioConfig& c, Tick t, VmId vm) {
  for (std::size_t i = 0; i < c.vms.size(); ++i) {
    if (c.vms[i].id == vm) return static_cast<std::size_t>(t) * c.vms.size() + i;
  }
  throw std::out_of_range("vm");
}

// ---------------------------------------------------------------------------

Outcome criterion_predictor() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  std::vector<double> t;
  for (int draw = 0; draw < 10000; ++draw) {
    const double x = ux(rng);
    const double s0 = u(rng);
    t.resize(1 + rng() % 50);
    for (auto& v : t) v = u(rng);
    predictor::AgingPredictor p(x, 60, s0);
    for (double v : t) p.update(v);
    const double err = std::abs(p.alpha() - oracle::aging_closed_form(s0, x, t));
    o.require(err < 1e-9, "aging error " + std::to_string(err));
  }
  for (int i = 0; i < 1000; ++i) {
    const double alpha = (i % 40) * 2.5;
    const double sigma = (i / 40) * 1.5;
    const double beta = predictor::compute_beta(alpha, sigma);
    o.require(beta == std::min((100.0 - alpha) / 3.0, sigma), "beta mismatch");
    o.require(alpha + 3.0 * beta <= 100.0 + 1e-12, "alpha + 3 beta > 100");
  }
  return o;
}

Outcome criterion_classify() {
  Outcome o;
  long long points = 0;
  for (int a = 0; a <= 1000; ++a) {
    const double alpha = a / 10.0;
    for (int b = 0; 3 * b + a <= 1000; ++b) {
      const double beta = b / 10.0;
      const predictor::AlertThresholds th{alpha, beta};
      int prev = 0;
      for (int l = 0; l <= 1000; ++l) {
        const double load = l / 10.0;
        const int got = static_cast<int>(predictor::classify(load, th));
        if (got != oracle::classify(load, alpha, beta)) {
          o.require(false, "mismatch at a=" + std::to_string(alpha) + " b=" + std::to_string(beta) +
                               " l=" + std::to_string(load));
        }
        if (got < prev) o.require(false, "not monotone in load");
        prev = got;
        ++points;
      }
    }
  }
  o.detail = o.ok ? std::to_string(points) + " grid points" : o.detail;
  return o;
}

Outcome criterion_wire() {
  Outcome o;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100000; ++i) {
    wire::ControlMessage m;
    m.source = static_cast<wire::SourceId>(rng() % wire::kNumSources);
    m.kind = static_cast<MsgKind>(rng() % wire::kNumKinds);
    m.seq = static_cast<std::uint16_t>(rng());
    m.auth_key = static_cast<std::uint32_t>(rng());
    m.next_proto = static_cast<std::uint8_t>(rng());
    m.payload.resize(rng() % 64);
    for (auto& b : m.payload) b = static_cast<std::uint8_t>(rng());
    const auto bytes = wire::encode_header(m);
    std::size_t used = 0;
    if (bytes.size() != wire::kHeaderSize + m.payload.size()) o.require(false, "framing length");
    if (!(wire::decode_header(bytes, &used) == m) || used != bytes.size()) {
      o.require(false, "round trip");
    }
  }
  for (int b0 = 0; b0 < 256; ++b0) {
    std::vector<std::uint8_t> frame(wire::kHeaderSize, 0);
    frame[0] = static_cast<std::uint8_t>(b0);
    const bool valid = (b0 >> 5) < wire::kNumSources && (b0 & 0x1f) < wire::kNumKinds;
    bool accepted = true;
    try {
      wire::decode_header(frame);
    } catch (const Error& e) {
      accepted = false;
      o.require(e.code() == Errc::kInvalidSource || e.code() == Errc::kInvalidKind,
                "wrong rejection code");
    }
    o.require(accepted == valid, "byte0 " + std::to_string(b0) + " misclassified");
  }
  return o;
}

struct Scenario {
  sim::ScenarioConfig config;
  RunResult result;
  std::vector<std::string> violations;  // policing-window checks from the observer
  long long policed_ticks = 0;
};

// Checks run on every tick the attacked VM is under full clamp.
void check_policed_tick(Scenario& s, const sim::TickView& v) {
  if (v.vm != kAttackedVm || v.policy->clamp_fraction < 1.0) return;
  ++s.policed_ticks;
  const auto& cfg = s.config.vms[kAttackedVm];
  const auto tick = std::to_string(v.tick);

  // Admitted load stays within α plus one packet.
  const double admitted = static_cast<double>(v.report->offered_bytes - v.report->policed_bytes);
  const double limit = v.policy->target_pct / 100.0 * static_cast<double>(cfg.capacity) + cfg.mtu;
  if (admitted > limit) s.violations.push_back("t=" + tick + " admitted above alpha");

  // Registered users keep everything they offered.
  std::uint64_t af41_offered = 0;
  std::uint64_t af41_passed = 0;
  for (const auto& p : v.offered) af41_offered += p.dscp == Dscp::kAF41 ? p.size : 0;
  for (const auto& p : v.passed) af41_passed += p.dscp == Dscp::kAF41 ? p.size : 0;
  if (af41_offered != af41_passed) s.violations.push_back("t=" + tick + " AF41 bytes lost");

  // Same admission as the greedy-priority oracle on the identical packet list.
  const auto admit = oracle::greedy_admit(
      v.offered, oracle::budget_bytes(v.policy->target_pct, v.policy->clamp_fraction, cfg.capacity));
  std::uint64_t oracle_bytes = 0;
  int worst_admitted = -1;
  int best_dropped = 99;
  std::vector<traffic::SimPacket> oracle_admitted;
  for (std::size_t i = 0; i < v.offered.size(); ++i) {
    const int slot = oracle::priority_slot(v.offered[i].dscp);
    if (admit[i]) {
      oracle_bytes += v.offered[i].size;
      worst_admitted = std::max(worst_admitted, slot);
      oracle_admitted.push_back(v.offered[i]);
    } else {
      best_dropped = std::min(best_dropped, slot);
    }
  }
  if (oracle_bytes != v.report->offered_bytes - v.report->policed_bytes) {
    s.violations.push_back("t=" + tick + " admission differs from greedy oracle");
  }
  if (worst_admitted > best_dropped) s.violations.push_back("t=" + tick + " priority inversion");
  // Passed traffic is the oracle's admitted list minus IDPS blocks, in order.
  std::size_t j = 0;
  for (const auto& p : v.passed) {
    while (j < oracle_admitted.size() && !(oracle_admitted[j] == p)) ++j;
    if (j == oracle_admitted.size()) {
      s.violations.push_back("t=" + tick + " passed packet not admitted by oracle");
      break;
    }
    ++j;
  }
}

Scenario run_scenario(int which) {
  Scenario s;
  s.config = sim::canonical_scenario(which);
  sim::RunOptions opts;
  opts.observer = [&s](const sim::TickView& v) { check_policed_tick(s, v); };
  s.result = sim::run(s.config, opts);
  return s;
}

std::vector<const sim::MessageRecord*> messages(const RunResult& r, MsgKind kind,
                                                bus::NodeAddr from, Tick since) {
  std::vector<const sim::MessageRecord*> out;
  for (const auto& m : r.messages) {
    if (m.kind == kind && m.from == from && m.sent_at >= since) out.push_back(&m);
  }
  return out;
}

Outcome criterion_scenario_one() {
  Outcome o;
  const auto s = run_scenario(1);
  const auto& r = s.result;
  const auto agent = bus::agent_addr(kAttackedVm);
  const Tick start = s.config.attacks[0].start_tick;

  // Alerts from the attacked VM, in emission order, from the attack onward.
  std::vector<const sim::MessageRecord*> alerts;
  for (const auto& m : r.messages) {
    if (m.from == agent && m.sent_at >= start &&
        (m.kind == MsgKind::kAlert1 || m.kind == MsgKind::kAlert2 || m.kind == MsgKind::kAlert3)) {
      alerts.push_back(&m);
    }
  }
  o.require(alerts.size() >= 3, "fewer than three alerts");
  if (!o.ok) return o;
  o.require(alerts[0]->kind == MsgKind::kAlert1 && alerts[1]->kind == MsgKind::kAlert2 &&
                alerts[2]->kind == MsgKind::kAlert3,
            "alerts out of order");
  o.require(alerts[0]->stream_seq < alerts[1]->stream_seq &&
                alerts[1]->stream_seq < alerts[2]->stream_seq,
            "alert sequence numbers not increasing");
  const Tick alert1 = alerts[0]->sent_at;
  const Tick alert2 = alerts[1]->sent_at;

  const auto rules = messages(r, MsgKind::kRuleUpdate, bus::kCms, alert2);
  o.require(!rules.empty(), "no RuleUpdate");
  if (!o.ok) return o;
  const Tick rule_at = rules[0]->sent_at;
  o.require(rule_at - alert2 <= 30, "RuleUpdate " + std::to_string(rule_at - alert2) +
                                        " ticks after Alert2");

  // Attacker share among admitted packets under 1% from 5 ticks after the rule.
  for (Tick t = rule_at + 5; t < s.config.attacks[0].end_tick; ++t) {
    const auto& row = r.series.rows[row_index(s.config, t, kAttackedVm)];
    if (row.attacker_share_pct >= 1.0) {
      o.require(false, "attacker share " + std::to_string(row.attacker_share_pct) + "% at t=" +
                           std::to_string(t));
      break;
    }
  }

  // α returns to the value snapshotted at Alert1.
  const double snapshot = r.traces[row_index(s.config, alert1, kAttackedVm)].alpha;
  const sim::MessageRecord* restore = nullptr;
  for (const auto& m : r.messages) {
    if (m.kind == MsgKind::kAck && m.to == agent && m.sent_at >= alert2 &&
        payload::decode_ack(m.payload).directive == payload::AckDirective::kRestoreAlpha) {
      restore = &m;
      break;
    }
  }
  o.require(restore != nullptr, "no restore directive");
  if (!o.ok) return o;
  const double restored = r.traces[row_index(s.config, restore->sent_at + 1, kAttackedVm)].alpha;
  o.require(std::abs(restored - snapshot) <= 1e-9,
            "alpha " + std::to_string(restored) + " vs snapshot " + std::to_string(snapshot));
  o.require(s.violations.empty(), s.violations.empty() ? "" : s.violations.front());
  if (o.ok) {
    o.detail = "Alert1@" + std::to_string(alert1) + " RuleUpdate@" + std::to_string(rule_at) +
               " alpha restored to " + std::to_string(snapshot);
  }
  return o;
}

Outcome criterion_scenario_two() {
  Outcome o;
  const auto s = run_scenario(2);
  const auto& r = s.result;
  const Tick start = s.config.attacks[0].start_tick;

  // Policing commands to the attacked VM's firewall, as issued by the CMS.
  std::vector<std::pair<Tick, double>> cmds;
  for (const auto& m : r.messages) {
    if (m.kind == MsgKind::kPolicingCommand && m.to == bus::firewall_addr(kAttackedVm) &&
        m.sent_at >= start) {
      cmds.emplace_back(m.sent_at, payload::decode_policing(m.payload).clamp);
    }
  }
  o.require(cmds.size() >= 5, "fewer than five policing commands");
  if (!o.ok) return o;
  const Tick level3 = cmds[0].first;  // CMS handles Alert3 and polices in the same tick
  const double expected[] = {1.0, 0.75, 0.5, 0.25, 0.0};
  for (int k = 0; k < 5; ++k) {
    o.require(cmds[k].second == expected[k], "clamp step " + std::to_string(k) + " is " +
                                                 std::to_string(cmds[k].second));
    o.require(cmds[k].first == level3 + 30 * k, "step " + std::to_string(k) + " at t=" +
                                                     std::to_string(cmds[k].first));
  }
  o.require(cmds[4].first - level3 <= 120, "release later than 120 ticks");

  // The firewall applies each step one bus hop later; the clamp column agrees.
  for (int k = 0; k < 5; ++k) {
    const auto& row = r.series.rows[row_index(s.config, cmds[k].first + 1, kAttackedVm)];
    o.require(row.clamp == expected[k], "applied clamp differs at step " + std::to_string(k));
  }
  o.require(s.policed_ticks > 0, "no fully clamped ticks observed");
  o.require(s.violations.empty(), s.violations.empty() ? "" : s.violations.front());
  if (o.ok) {
    o.detail = "Level3 policing@" + std::to_string(level3) + ", released@" +
               std::to_string(cmds[4].first);
  }
  return o;
}

Outcome criterion_qos() {
  Outcome o;
  long long ticks = 0;
  for (int which : {1, 2}) {
    const auto s = run_scenario(which);
    ticks += s.policed_ticks;
    o.require(s.policed_ticks > 0, "scenario " + std::to_string(which) + " never fully clamped");
    o.require(s.violations.empty(), s.violations.empty() ? "" : s.violations.front());
  }

  // Synthetic contention: every class present, budget below the CS7 volume.
  std::mt19937_64 rng(6);
  const Dscp classes[] = {Dscp::kAF41, Dscp::kCS7, Dscp::kBestEffort};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<traffic::SimPacket> pkts(2000);
    for (auto& p : pkts) {
      p.dscp = classes[rng() % 3];
      p.size = 1 + static_cast<std::uint32_t>(rng() % 1500);
    }
    const double target = static_cast<double>(rng() % 60);
    const auto res = firewall::police(pkts, {.target_pct = target, .clamp_fraction = 1.0}, 1'500'000);
    const auto admit = oracle::greedy_admit(pkts, oracle::budget_bytes(target, 1.0, 1'500'000));
    std::vector<traffic::SimPacket> want;
    std::map<Dscp, std::uint64_t> offered, kept;
    for (std::size_t i = 0; i < pkts.size(); ++i) {
      offered[pkts[i].dscp] += pkts[i].size;
      if (admit[i]) want.push_back(pkts[i]);
    }
    for (const auto& p : res.admitted) kept[p.dscp] += p.size;
    o.require(res.admitted == want, "police differs from greedy oracle");
    if (kept[Dscp::kAF41] == offered[Dscp::kAF41] && kept[Dscp::kCS7] < offered[Dscp::kCS7]) {
      o.require(kept[Dscp::kBestEffort] == 0, "BestEffort kept while CS7 dropped");
    }
  }
  if (o.ok) o.detail = std::to_string(ticks) + " fully clamped ticks checked";
  return o;
}

Outcome criterion_dscp() {
  Outcome o;
  struct Row {
    const char* name;
    int decimal;
    const char* binary;
  };
  const Row table[] = {{"AF11", 10, "001010"}, {"AF12", 12, "001100"}, {"AF13", 14, "001110"},
                       {"AF21", 18, "010010"}, {"AF22", 20, "010100"}, {"AF23", 22, "010110"},
                       {"AF31", 26, "011010"}, {"AF32", 28, "011100"}, {"AF33", 30, "011110"},
                       {"AF41", 34, "100010"}, {"AF42", 36, "100100"}, {"AF43", 38, "100110"},
                       {"CS7", 56, "111000"},  {"BestEffort", 0, "000000"}};
  o.require(kDscpTable.size() == std::size(table), "table size");
  for (const auto& want : table) {
    bool found = false;
    for (const auto& got : kDscpTable) {
      if (got.name != want.name) continue;
      found = true;
      o.require(got.decimal == want.decimal && got.binary == want.binary,
                std::string(want.name) + " triple differs");
      o.require(std::bitset<6>(std::string(got.binary)).to_ulong() == got.decimal,
                std::string(want.name) + " binary/decimal inconsistent");
      o.require(static_cast<int>(got.code) == got.decimal, std::string(want.name) + " code");
    }
    o.require(found, std::string(want.name) + " missing");
  }
  return o;
}

Outcome criterion_determinism() {
  Outcome o;
  std::vector<sim::ScenarioConfig> configs{sim::canonical_scenario(1), sim::canonical_scenario(2)};
  auto lossy = sim::canonical_scenario(1);
  lossy.loss = 0.2;
  lossy.seed = 77;
  configs.push_back(lossy);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto a = csv_of(sim::run(configs[i]));
    const auto b = csv_of(sim::run(configs[i]));
    const auto p = csv_of(sim::run(configs[i], {.mode = sim::ExecutionMode::kParallel}));
    o.require(a == b, "config " + std::to_string(i) + ": repeated runs differ");
    o.require(a == p, "config " + std::to_string(i) + ": parallel differs from sequential");
  }
  return o;
}

Outcome criterion_conservation() {
  Outcome o;
  std::size_t checked = 0;
  for (int which : {1, 2}) {
    const auto r = sim::run(sim::canonical_scenario(which));
    for (const auto& b : r.bytes) {
      o.require(b.offered == b.passed + b.policed + b.blocked, "bytes not conserved");
      ++checked;
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " (tick, vm) rows";
  return o;
}

}  // namespace

int main() {
  bool all = true;
  all &= report(1, "aging predictor, beta and band ceiling", 1.0, criterion_predictor);
  all &= report(2, "alert classification grid", 5.0, criterion_classify);
  all &= report(3, "wire codec", 5.0, criterion_wire);
  all &= report(4, "scenario one end-to-end", 10.0, criterion_scenario_one);
  all &= report(5, "scenario two end-to-end", 10.0, criterion_scenario_two);
  all &= report(6, "QoS preservation under full clamp", 0.0, criterion_qos);
  all &= report(7, "DSCP table fidelity", 0.0, criterion_dscp);
  all &= report(8, "determinism", 0.0, criterion_determinism);
  all &= report(9, "byte conservation", 0.0, criterion_conservation);
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
