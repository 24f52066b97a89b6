#pragma once

// Reference implementations written independently of the library. Tests compare
// the library against these; none of them call into ddsim beyond plain types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "ddsim/traffic.hpp"

namespace oracle {

// S_n = x^n S_0 + (1-x) * sum_{k=1..n} x^(n-k) T_k
inline double aging_closed_form(double s0, double x, std::span<const double> t) {
  const std::size_t n = t.size();
  double acc = std::pow(x, static_cast<double>(n)) * s0;
  for (std::size_t k = 1; k <= n; ++k) {
    acc += (1.0 - x) * std::pow(x, static_cast<double>(n - k)) * t[k - 1];
  }
  return acc;
}

inline double two_pass_sigma(std::span<const double> v) {
  double mean = 0.0;
  for (double d : v) mean += d;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double d : v) ss += (d - mean) * (d - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// 0..3; beta <= 0 collapses the bands onto alpha.
inline int classify(double load, double alpha, double beta) {
  if (beta <= 0.0) return load > alpha ? 3 : 0;
  int level = 0;
  if (load >= alpha + beta) level = 1;
  if (load >= alpha + 2 * beta) level = 2;
  if (load >= alpha + 3 * beta) level = 3;
  return level;
}

inline double budget_bytes(double target, double clamp, std::uint64_t capacity) {
  if (clamp <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(capacity) * (target + (100.0 - target) * (1.0 - clamp)) / 100.0;
}

// Admission order: exempt AF41, then CS7, then AF4x..AF1x by ascending drop
// precedence, BestEffort last. Walk in that order and stop at the first misfit.
inline int priority_slot(ddsim::Dscp d) {
  static const ddsim::Dscp order[] = {
      ddsim::Dscp::kAF41, ddsim::Dscp::kCS7,  ddsim::Dscp::kAF42, ddsim::Dscp::kAF43,
      ddsim::Dscp::kAF31, ddsim::Dscp::kAF32, ddsim::Dscp::kAF33, ddsim::Dscp::kAF21,
      ddsim::Dscp::kAF22, ddsim::Dscp::kAF23, ddsim::Dscp::kAF11, ddsim::Dscp::kAF12,
      ddsim::Dscp::kAF13, ddsim::Dscp::kBestEffort};
  for (int i = 0; i < 14; ++i) {
    if (order[i] == d) return i;
  }
  return 14;
}

inline std::vector<bool> greedy_admit(std::span<const ddsim::traffic::SimPacket> pkts,
                                      double budget) {
  std::vector<std::size_t> idx(pkts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return priority_slot(pkts[a].dscp) < priority_slot(pkts[b].dscp);
  });
  std::vector<bool> admit(pkts.size(), false);
  double used = 0.0;
  for (std::size_t i : idx) {
    if (used + pkts[i].size > budget) break;
    used += pkts[i].size;
    admit[i] = true;
  }
  return admit;
}

// Most frequent signature with share >= theta; ties to the smaller token.
struct Dominant {
  std::uint32_t token;
  double support;
};

inline std::optional<Dominant> dominant_token(std::span<const ddsim::traffic::SimPacket> pkts,
                                              double theta) {
  if (pkts.empty()) return std::nullopt;
  std::map<std::uint32_t, std::size_t> counts;
  for (const auto& p : pkts) ++counts[p.signature];
  std::uint32_t best = 0;
  std::size_t best_n = 0;
  for (const auto& [tok, n] : counts) {
    if (n > best_n) {
      best = tok;
      best_n = n;
    }
  }
  const double share = static_cast<double>(best_n) / static_cast<double>(pkts.size());
  if (share < theta) return std::nullopt;
  return Dominant{best, share};
}

}  // namespace oracle
