// Sequential reference vs OpenMP per-VM stages, plus the policing kernel.

#include <benchmark/benchmark.h>

#include "ddsim/config.hpp"
#include "ddsim/engine.hpp"
#include "ddsim/firewall.hpp"

namespace {

ddsim::sim::ScenarioConfig bench_config(int vms) {
  auto cfg = ddsim::sim::canonical_scenario(1);
  cfg.duration = 120;
  cfg.attacks.clear();
  cfg.vms.clear();
  for (int v = 0; v < vms; ++v) {
    cfg.vms.push_back({static_cast<ddsim::traffic::VmId>(v), 1'500'000, 1500,
                       ddsim::sim::make_users(v, 30, 6, 1.0, 0.5, 0.5)});
  }
  return cfg;
}

void BM_Run(benchmark::State& state, ddsim::sim::ExecutionMode mode) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  ddsim::sim::RunOptions opts;
  opts.mode = mode;
  for (auto _ : state) {
    auto r = ddsim::sim::run(cfg, opts);
    benchmark::DoNotOptimize(r.series.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.duration * state.range(0));
}

void BM_RunSequential(benchmark::State& state) {
  BM_Run(state, ddsim::sim::ExecutionMode::kSequential);
}
void BM_RunParallel(benchmark::State& state) {
  BM_Run(state, ddsim::sim::ExecutionMode::kParallel);
}

BENCHMARK(BM_RunSequential)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunParallel)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Police(benchmark::State& state) {
  std::vector<ddsim::traffic::SimPacket> packets;
  const ddsim::Dscp classes[] = {ddsim::Dscp::kBestEffort, ddsim::Dscp::kAF41,
                                 ddsim::Dscp::kCS7, ddsim::Dscp::kAF22};
  for (int i = 0; i < state.range(0); ++i) {
    packets.push_back({.user_id = static_cast<std::uint32_t>(i % 50),
                       .size = 1500,
                       .dscp = classes[i % 4],
                       .signature = static_cast<std::uint32_t>(i)});
  }
  ddsim::firewall::PolicingPolicy policy{.vm_id = 0, .target_pct = 30.0, .clamp_fraction = 1.0};
  for (auto _ : state) {
    auto r = ddsim::firewall::police(packets, policy, 1500ull * state.range(0));
    benchmark::DoNotOptimize(r.admitted_bytes);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_Police)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
