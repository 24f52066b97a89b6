#include "ddsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ddsim/error.hpp"

namespace ddsim::sim {

double quantize6(double v) {
  const double q = std::round(v * 1e6) / 1e6;
  return q == 0.0 ? 0.0 : q;  // no negative zero in the CSV
}

void MetricsSeries::append(MetricsRow row) {
  row.offered_pct = quantize6(row.offered_pct);
  row.alpha = quantize6(row.alpha);
  row.clamp = quantize6(row.clamp);
  row.admitted_pct = quantize6(row.admitted_pct);
  row.attacker_share_pct = quantize6(row.attacker_share_pct);
  rows.push_back(row);
}

void write_csv(const MetricsSeries& series, std::ostream& out) {
  out << kCsvHeader << '\n';
  char line[256];
  for (const auto& r : series.rows) {
    std::snprintf(line, sizeof line, "%lld,%u,%.6f,%.6f,%d,%.6f,%.6f,%.6f,%u\n",
                  static_cast<long long>(r.tick), r.vm, r.offered_pct, r.alpha, r.level, r.clamp,
                  r.admitted_pct, r.attacker_share_pct, r.blocked);
    out << line;
  }
}

void export_csv(const MetricsSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot open " + path.string() + " for writing");
  write_csv(series, out);
  out.flush();
  if (!out) throw Error(Errc::kIoError, "write failed for " + path.string());
}

MetricsSeries parse_csv(std::istream& in) {
  MetricsSeries s;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(Errc::kMalformedPayload, "missing or unexpected CSV header");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    MetricsRow r;
    long long tick = 0;
    unsigned vm = 0;
    unsigned blocked = 0;
    int consumed = 0;
    const int n = std::sscanf(line.c_str(), "%lld,%u,%lf,%lf,%d,%lf,%lf,%lf,%u%n", &tick, &vm,
                              &r.offered_pct, &r.alpha, &r.level, &r.clamp, &r.admitted_pct,
                              &r.attacker_share_pct, &blocked, &consumed);
    if (n != 9 || static_cast<std::size_t>(consumed) != line.size()) {
      throw Error(Errc::kMalformedPayload, "bad CSV row at line " + std::to_string(lineno));
    }
    r.tick = tick;
    r.vm = vm;
    r.blocked = blocked;
    s.rows.push_back(r);
  }
  return s;
}

MetricsSeries read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  return parse_csv(in);
}

}  // namespace ddsim::sim
