// ddsim: run the DDoS detection/mitigation simulator from the command line.
//
//   ddsim run --config <file> --out <csv> [--seed N] [--duration T] [--loss R]
//   ddsim demo --scenario {one|two} [--out <csv>]
//   ddsim validate --config <file>
//
// Exit codes: 0 success, 1 config error, 2 I/O error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "ddsim/config.hpp"
#include "ddsim/engine.hpp"
#include "ddsim/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

void print_timeline(const ddsim::sim::RunResult& r, ddsim::sim::VmId vm) {
  std::cout << "event timeline for vm " << vm << ":\n";
  for (const auto& e : r.cms_events) {
    if (e.vm != vm) continue;
    std::printf("  t=%-5lld %-18s %g\n", static_cast<long long>(e.tick),
                std::string(ddsim::cms::event_name(e.type)).c_str(), e.value);
  }
}

void print_summary(const ddsim::sim::RunResult& r) {
  const auto& c = r.cms_counters;
  std::cout << "messages delivered " << r.delivered << ", lost " << r.lost << "; cms inbound "
            << c.inbound << ", dispatched " << c.dispatched << ", dropped "
            << c.dropped_auth + c.dropped_unknown + c.dropped_malformed << "; idps rules "
            << r.rules.size() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed DDoS detection and mitigation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<long long> duration;
  std::optional<double> loss;
  bool parallel = false;

  auto* run = app.add_subcommand("run", "Run a scenario file and write the metrics CSV");
  run->add_option("--config", config_path, "Scenario file")->required();
  run->add_option("--out", out_path, "Output CSV")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--duration", duration, "Override the duration in ticks");
  run->add_option("--loss", loss, "Override the control-plane loss rate");
  run->add_flag("--parallel", parallel, "Run per-VM stages on OpenMP threads");

  std::string scenario;
  auto* demo = app.add_subcommand("demo", "Run one of the two reference scenarios");
  demo->add_option("--scenario", scenario, "one | two")
      ->required()
      ->check(CLI::IsMember({"one", "two"}));
  demo->add_option("--out", out_path, "Output CSV");
  demo->add_flag("--parallel", parallel, "Run per-VM stages on OpenMP threads");

  auto* check = app.add_subcommand("validate", "Check a scenario file without running it");
  check->add_option("--config", config_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  using namespace ddsim;
  try {
    sim::RunOptions options;
    options.mode = parallel ? sim::ExecutionMode::kParallel : sim::ExecutionMode::kSequential;

    if (*check) {
      const auto cfg = sim::load_config(config_path);
      std::cout << config_path << ": ok (" << cfg.vms.size() << " VMs, " << cfg.duration
                << " ticks, " << cfg.attacks.size() << " attacks)\n";
      return kExitOk;
    }

    sim::ScenarioConfig cfg;
    if (*run) {
      cfg = sim::load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (duration) cfg.duration = *duration;
      if (loss) cfg.loss = *loss;
      sim::validate(cfg);
    } else {
      cfg = sim::canonical_scenario(scenario == "one" ? 1 : 2);
    }

    const auto result = sim::run(cfg, options);
    if (!out_path.empty()) sim::export_csv(result.series, out_path);
    if (*demo) {
      for (const auto& at : cfg.attacks) print_timeline(result, at.vm_id);
    }
    print_summary(result);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    if (e.code() == Errc::kIoError) {
      std::cerr << "i/o error: " << e.what() << '\n';
      return kExitIo;
    }
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
