#include "ddsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ddsim/error.hpp"

namespace ddsim::sim {

namespace pt = boost::property_tree;

std::vector<traffic::UserProfile> make_users(VmId vm, int count, int registered, double mean,
                                             double spread, double stddev) {
  std::vector<traffic::UserProfile> users;
  users.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // Means spread linearly over mean·[1 − spread, 1 + spread].
    const double pos = count > 1 ? 2.0 * i / (count - 1) - 1.0 : 0.0;
    users.push_back({.user_id = static_cast<traffic::UserId>(vm * 1000 + i + 1),
                     .registered = i < registered,
                     .mean_demand = mean * (1.0 + spread * pos),
                     .demand_stddev = stddev});
  }
  return users;
}

void validate(const ScenarioConfig& c) {
  if (c.duration <= 0) throw ConfigError("scenario.duration", "must be > 0");
  if (!(c.loss >= 0.0 && c.loss <= 1.0)) throw ConfigError("scenario.loss", "must be in [0,1]");
  if (c.vms.empty()) throw ConfigError("scenario.vm_count", "must be >= 1");

  std::set<VmId> ids;
  for (const auto& vm : c.vms) {
    const std::string p = "vm." + std::to_string(vm.id);
    if (!ids.insert(vm.id).second) throw ConfigError(p, "duplicate VM id");
    if (vm.capacity == 0) throw ConfigError(p + ".capacity", "must be > 0");
    if (vm.mtu == 0) throw ConfigError(p + ".mtu", "must be > 0");
    for (const auto& u : vm.users) {
      if (u.mean_demand < 0.0) throw ConfigError(p + ".user_mean", "must be >= 0");
      if (u.demand_stddev < 0.0) throw ConfigError(p + ".user_stddev", "must be >= 0");
    }
  }

  const auto& a = c.agent;
  if (!(a.smoothing >= 0.0 && a.smoothing <= 1.0)) {
    throw ConfigError("predictor.smoothing", "must be in [0,1]");
  }
  if (a.window < 2) throw ConfigError("predictor.window", "must be >= 2");
  if (a.warmup > a.window) throw ConfigError("predictor.warmup", "must not exceed window");
  if (a.hysteresis < 1) throw ConfigError("predictor.hysteresis", "must be >= 1");
  if (a.report_period < 0) throw ConfigError("predictor.report_period", "must be >= 0");
  if (a.report_size < 1) throw ConfigError("predictor.report_size", "must be >= 1");

  if (!(c.mining.theta > 0.0 && c.mining.theta <= 1.0)) {
    throw ConfigError("mining.theta", "must be in (0,1]");
  }
  if (c.mining.latency < 0) throw ConfigError("mining.latency", "must be >= 0");
  if (c.cms.detect_deadline < 1) throw ConfigError("cms.detect_deadline", "must be >= 1");
  if (c.cms.release_step < 1) throw ConfigError("cms.release_step", "must be >= 1");
  if (c.cms.release_steps < 1) throw ConfigError("cms.release_steps", "must be >= 1");
  if (c.cms.alloha_interval < 0) throw ConfigError("cms.alloha_interval", "must be >= 0");

  for (std::size_t i = 0; i < c.attacks.size(); ++i) {
    const auto& at = c.attacks[i];
    const std::string p = "attack." + std::to_string(i);
    if (!ids.contains(at.vm_id)) throw ConfigError(p + ".vm", "unknown VM id");
    if (at.start_tick >= at.end_tick) throw ConfigError(p + ".end", "must be after start");
    if (!(at.aggregate_rate > 0.0)) throw ConfigError(p + ".rate", "must be > 0");
    if (at.attacker_user_ids.empty()) throw ConfigError(p + ".attackers", "must be >= 1");
    if (at.signature < traffic::kAttackTokenBase) {
      throw ConfigError(p + ".signature",
                        "must be >= " + std::to_string(traffic::kAttackTokenBase));
    }
  }
}

namespace {

// Typed access to one section, tracking which keys were consumed so stray
// keys can be reported.
class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!tree_) return;
    auto v = tree_->get_optional<std::string>(key);
    if (!v) return;
    used_.insert(key);
    std::istringstream in(*v);
    T parsed{};
    if constexpr (std::is_same_v<T, bool>) {
      std::string word;
      in >> word;
      if (word == "true" || word == "1" || word == "yes") {
        parsed = true;
      } else if (word == "false" || word == "0" || word == "no") {
        parsed = false;
      } else {
        throw ConfigError(name_ + "." + key, "expected a boolean, got '" + *v + "'");
      }
    } else {
      in >> parsed;
      if (in.fail() || !(in >> std::ws).eof()) {
        throw ConfigError(name_ + "." + key, "cannot parse '" + *v + "'");
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (v->find('-') != std::string::npos) {
          throw ConfigError(name_ + "." + key, "must be non-negative");
        }
      }
    }
    out = parsed;
  }

  void finish() const {
    if (!tree_) return;
    for (const auto& [key, value] : *tree_) {
      if (!used_.contains(key)) throw ConfigError(name_ + "." + key, "unknown key");
    }
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> used_;
};

struct VmTemplate {
  std::uint64_t capacity = 1'500'000;
  std::uint32_t mtu = 1500;
  int users = 0;
  int registered = 0;
  double user_mean = 1.0;
  double user_spread = 0.0;
  double user_stddev = 0.0;
};

void read_vm(Section& s, VmTemplate& t) {
  s.read("capacity", t.capacity);
  s.read("mtu", t.mtu);
  s.read("users", t.users);
  s.read("registered", t.registered);
  s.read("user_mean", t.user_mean);
  s.read("user_spread", t.user_spread);
  s.read("user_stddev", t.user_stddev);
  s.finish();
}

VmConfig build_vm(VmId id, const VmTemplate& t, const std::string& path) {
  if (t.users < 0 || t.users > 999) throw ConfigError(path + ".users", "must be in [0,999]");
  if (t.registered < 0 || t.registered > t.users) {
    throw ConfigError(path + ".registered", "must be in [0,users]");
  }
  if (t.user_spread < 0.0 || t.user_spread > 1.0) {
    throw ConfigError(path + ".user_spread", "must be in [0,1]");
  }
  return {id, t.capacity, t.mtu,
          make_users(id, t.users, t.registered, t.user_mean, t.user_spread, t.user_stddev)};
}

const pt::ptree* child(const pt::ptree& root, const std::string& name) {
  auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  pt::ptree root;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }

  ScenarioConfig c;
  int vm_count = 0;
  {
    Section s("scenario", child(root, "scenario"));
    s.read("seed", c.seed);
    s.read("duration", c.duration);
    s.read("vm_count", vm_count);
    s.read("loss", c.loss);
    s.read("agents", c.agents_enabled);
    s.finish();
  }
  if (vm_count < 1) throw ConfigError("scenario.vm_count", "must be >= 1");

  VmTemplate defaults;
  {
    Section s("vm", child(root, "vm"));
    read_vm(s, defaults);
  }
  for (int v = 0; v < vm_count; ++v) {
    const std::string name = "vm." + std::to_string(v);
    VmTemplate t = defaults;
    if (const auto* tree = child(root, name)) {
      Section s(name, tree);
      read_vm(s, t);
    }
    c.vms.push_back(build_vm(static_cast<VmId>(v), t, name));
  }

  {
    Section s("predictor", child(root, "predictor"));
    auto& a = c.agent;
    s.read("smoothing", a.smoothing);
    s.read("window", a.window);
    a.warmup = a.window;
    s.read("warmup", a.warmup);
    s.read("hysteresis", a.hysteresis);
    s.read("buffer", a.buffer_capacity);
    s.read("report_period", a.report_period);
    s.read("report_size", a.report_size);
    s.finish();
  }
  {
    Section s("mining", child(root, "mining"));
    s.read("theta", c.mining.theta);
    s.read("latency", c.mining.latency);
    s.finish();
  }
  {
    Section s("cms", child(root, "cms"));
    s.read("detect_deadline", c.cms.detect_deadline);
    s.read("release_step", c.cms.release_step);
    s.read("release_steps", c.cms.release_steps);
    s.read("alloha_interval", c.cms.alloha_interval);
    s.finish();
  }

  std::uint32_t attack_index = 0;
  for (const auto& [name, tree] : root) {
    if (name == "scenario" || name == "vm" || name == "predictor" || name == "mining" ||
        name == "cms" || name.rfind("vm.", 0) == 0) {
      if (name.rfind("vm.", 0) == 0) {
        const std::string idx = name.substr(3);
        if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos ||
            std::stoi(idx) >= vm_count) {
          throw ConfigError(name, "no such VM (vm_count = " + std::to_string(vm_count) + ")");
        }
      }
      continue;
    }
    if (name.rfind("attack.", 0) != 0) throw ConfigError(name, "unknown section");

    Section s(name, &tree);
    traffic::AttackSpec at;
    int attackers = 0;
    s.read("vm", at.vm_id);
    s.read("start", at.start_tick);
    s.read("end", at.end_tick);
    s.read("attackers", attackers);
    s.read("rate", at.aggregate_rate);
    std::uint32_t token = traffic::kAttackTokenBase;
    s.read("signature", token);
    at.signature = token;
    s.finish();
    if (attackers < 1 || attackers > 999) throw ConfigError(name + ".attackers", "must be in [1,999]");
    for (int j = 0; j < attackers; ++j) {
      at.attacker_user_ids.push_back(kAttackerIdBase + attack_index * 1000 + j + 1);
    }
    ++attack_index;
    c.attacks.push_back(std::move(at));
  }

  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  if (in.bad()) throw Error(Errc::kIoError, "cannot read " + path.string());
  return parse_config(text.str());
}

ScenarioConfig canonical_scenario(int which) {
  if (which != 1 && which != 2) {
    throw ConfigError("scenario", "canonical scenarios are 1 and 2");
  }
  ScenarioConfig c;
  c.seed = 2024;
  c.duration = 600;
  for (VmId v = 0; v < 10; ++v) {
    // 30 users around 1% each (≈30% aggregate), 6 registered.
    c.vms.push_back({v, 1'500'000, 1500, make_users(v, 30, 6, 1.0, 0.5, 0.5)});
  }
  c.agent.buffer_capacity = 500;
  c.mining.latency = which == 1 ? 15 : 45;
  traffic::AttackSpec at;
  at.vm_id = 3;
  at.start_tick = 300;
  at.end_tick = 600;
  at.aggregate_rate = 40.0;
  at.signature = traffic::kAttackTokenBase + 7;
  for (int j = 0; j < 5; ++j) at.attacker_user_ids.push_back(kAttackerIdBase + j + 1);
  c.attacks.push_back(at);
  validate(c);
  return c;
}

}  // namespace ddsim::sim
