#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ddsim/error.hpp"
#include "ddsim/traffic.hpp"

using namespace ddsim;
using namespace ddsim::traffic;

namespace {

constexpr std::uint64_t kCap = 1'500'000;

std::uint64_t total_bytes(const std::vector<SimPacket>& pkts) {
  std::uint64_t s = 0;
  for (const auto& p : pkts) s += p.size;
  return s;
}

}  // namespace

TEST_SUITE("traffic") {
  TEST_CASE("zero variance yields exactly the mean demand") {
    const std::vector<UserProfile> users{{1, false, 10.0, 0.0}, {2, true, 2.5, 0.0}};
    Rng rng(1);
    const auto pkts = generate_tick(users, 4, kCap, 1500, rng);
    std::map<UserId, std::uint64_t> per_user;
    for (const auto& p : pkts) {
      per_user[p.user_id] += p.size;
      CHECK(p.vm_id == 4);
      CHECK(p.size <= 1500);
      CHECK(p.size > 0);
      CHECK_FALSE(p.is_attack);
      CHECK(p.signature < kAttackTokenBase);
    }
    CHECK(per_user[1] == 150'000);
    CHECK(per_user[2] == 37'500);
  }

  TEST_CASE("no users means no packets") {
    Rng rng(1);
    CHECK(generate_tick({}, 0, kCap, 1500, rng).empty());
  }

  TEST_CASE("aggregate mean within three standard errors") {
    const std::vector<UserProfile> users{
        {1, false, 10.0, 1.0}, {2, false, 12.0, 1.0}, {3, false, 8.0, 1.0}};
    const double expected = 30.0 / 100.0 * kCap;
    const double sd = std::sqrt(3.0) / 100.0 * kCap;
    constexpr int kTicks = 10000;
    Rng rng(2024);
    double sum = 0.0;
    for (int t = 0; t < kTicks; ++t) {
      sum += static_cast<double>(total_bytes(generate_tick(users, 0, kCap, 1500, rng)));
    }
    const double mean = sum / kTicks;
    CHECK(std::abs(mean - expected) < 3.0 * sd / std::sqrt(double(kTicks)));
  }

  TEST_CASE("same seed, same packets") {
    const std::vector<UserProfile> users{{1, false, 10.0, 3.0}, {2, false, 5.0, 2.0}};
    Rng a(derive_seed(7, 3));
    Rng b(derive_seed(7, 3));
    for (int t = 0; t < 50; ++t) {
      CHECK(generate_tick(users, 0, kCap, 1500, a) == generate_tick(users, 0, kCap, 1500, b));
    }
    CHECK(derive_seed(7, 3) != derive_seed(7, 4));
    CHECK(derive_seed(7, 3) != derive_seed(8, 3));
  }

  TEST_CASE("attack injection window and rate") {
    AttackSpec spec{.vm_id = 3,
                    .start_tick = 300,
                    .end_tick = 600,
                    .attacker_user_ids = {1001, 1002, 1003},
                    .aggregate_rate = 40.0,
                    .signature = kAttackTokenBase + 7};
    CHECK(inject_attack(spec, 299, kCap, 1500).empty());
    CHECK(inject_attack(spec, 600, kCap, 1500).empty());
    const auto pkts = inject_attack(spec, 300, kCap, 1500);
    CHECK(total_bytes(pkts) == 600'000);
    CHECK(pkts.size() == 400);
    std::map<UserId, int> per_attacker;
    for (const auto& p : pkts) {
      CHECK(p.is_attack);
      CHECK(p.signature == spec.signature);
      CHECK(p.vm_id == 3);
      ++per_attacker[p.user_id];
    }
    CHECK(per_attacker.size() == 3);
    for (const auto& [id, n] : per_attacker) CHECK(std::abs(n - 400 / 3) <= 1);

    spec.attacker_user_ids.clear();
    CHECK(inject_attack(spec, 300, kCap, 1500).empty());
  }

  TEST_CASE("attack share recount agrees with ground truth") {
    const std::vector<UserProfile> users{{1, false, 20.0, 5.0}, {2, false, 15.0, 5.0}};
    AttackSpec spec{.vm_id = 0, .start_tick = 0, .end_tick = 10,
                    .attacker_user_ids = {9001}, .aggregate_rate = 25.0,
                    .signature = kAttackTokenBase + 1};
    Rng rng(3);
    for (Tick t = 0; t < 10; ++t) {
      auto pkts = generate_tick(users, 0, kCap, 1500, rng);
      const auto atk = inject_attack(spec, t, kCap, 1500);
      pkts.insert(pkts.end(), atk.begin(), atk.end());
      std::uint64_t by_flag = 0;
      std::uint64_t by_token = 0;
      for (const auto& p : pkts) {
        if (p.is_attack) by_flag += p.size;
        if (p.signature >= kAttackTokenBase) by_token += p.size;
      }
      CHECK(by_flag == by_token);
      CHECK(by_flag == percent_to_bytes(25.0, kCap));
    }
  }

  TEST_CASE("top_consumers examples") {
    UsageCounters u{{1, 500}, {2, 900}, {3, 100}, {4, 900}};
    CHECK(top_consumers(u, 2) == std::vector<UserId>{2, 4});
    CHECK(top_consumers(u, 10) == std::vector<UserId>{2, 4, 1, 3});
    CHECK(top_consumers({}, 3).empty());
    CHECK_THROWS_AS(top_consumers(u, 0), Error);
  }

  TEST_CASE("top_consumers equals a full-sort prefix") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      UsageCounters u;
      const int n_users = 1 + static_cast<int>(rng() % 40);
      for (int i = 0; i < n_users; ++i) u[rng() % 1000] = rng() % 20;
      std::vector<std::pair<UserId, std::uint64_t>> all(u.begin(), u.end());
      std::sort(all.begin(), all.end(), [](auto a, auto b) {
        return std::tie(b.second, a.first) < std::tie(a.second, b.first);
      });
      for (std::size_t k = 1; k <= all.size() + 2; ++k) {
        std::vector<UserId> want;
        for (std::size_t i = 0; i < std::min(k, all.size()); ++i) want.push_back(all[i].first);
        CHECK(top_consumers(u, k) == want);
      }
    }
  }

  TEST_CASE("percent_to_bytes rounds to nearest byte") {
    CHECK(percent_to_bytes(0.0, kCap) == 0);
    CHECK(percent_to_bytes(-3.0, kCap) == 0);
    CHECK(percent_to_bytes(100.0, kCap) == kCap);
    CHECK(percent_to_bytes(0.5, 301) == 2);  // 1.505 bytes
  }
}
