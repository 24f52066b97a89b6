#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ddsim/traffic.hpp"
#include "ddsim/wire.hpp"

namespace ddsim::sim {

using traffic::Tick;
using traffic::VmId;

inline constexpr const char* kCsvHeader =
    "tick,vm,offered_pct,alpha,level,clamp,admitted_pct,attacker_share_pct,blocked";

// One (tick, vm) row. Real-valued fields are stored rounded to 1e-6, the
// resolution of the CSV, so a written series parses back to itself.
struct MetricsRow {
  Tick tick = 0;
  VmId vm = 0;
  double offered_pct = 0.0;
  double alpha = 0.0;
  int level = 0;
  double clamp = 0.0;
  double admitted_pct = 0.0;
  double attacker_share_pct = 0.0;
  std::uint32_t blocked = 0;

  bool operator==(const MetricsRow&) const = default;
};

double quantize6(double v);

struct MetricsSeries {
  std::vector<MetricsRow> rows;
  // Control messages emitted per tick, indexed by MsgKind.
  std::vector<std::array<std::uint32_t, wire::kNumKinds>> messages_by_kind;

  void append(MetricsRow row);  // quantizes real fields
};

void write_csv(const MetricsSeries& series, std::ostream& out);
void export_csv(const MetricsSeries& series, const std::filesystem::path& path);  // IoError

// Rows only; throws Error(kMalformedPayload) on a bad header or row.
MetricsSeries parse_csv(std::istream& in);
MetricsSeries read_csv(const std::filesystem::path& path);  // + IoError

}  // namespace ddsim::sim
