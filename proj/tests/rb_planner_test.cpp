#include <cmath>
#include <stdexcept>

#include "aoisim/rb_planner.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aoisim;

namespace {

ChannelModel Model(double mean_snr, double epsilon) {
  ChannelModel m = ChannelModel::FromMeanSnrDb(20.0, epsilon);
  m.per_device_mean_snr = {mean_snr};
  return m;
}

}  // namespace

TEST_SUITE("rb_planner") {

TEST_CASE("single RB") {
  const auto plan = PlanMessage(1, AgingKind::kLinear, Model(100, 1), 0, 50, 3, 0);
  CHECK(plan.splits == std::vector<int>{1});
}

TEST_CASE("low outage sends everything at once") {
  const auto plan = PlanMessage(2, AgingKind::kLinear, Model(100, 1), 0, 50, 3, 0);
  CHECK(plan.splits == std::vector<int>{2});
  CHECK(plan.expected_slots == doctest::Approx(1.0202).epsilon(1e-4));
  CHECK(ExpectedSlots({1, 1}, Model(100, 1), 0) == doctest::Approx(2.0201).epsilon(1e-4));
}

TEST_CASE("high outage splits the message") {
  // one RB fails with probability 0.9, two with 0.99: 2 * 10 slots beats 100
  const double eps = -100.0 * std::log(0.1);
  const auto plan = PlanMessage(2, AgingKind::kLinear, Model(100, eps), 0, 50, 3, 0);
  CHECK(plan.splits == std::vector<int>{1, 1});
  CHECK(plan.expected_slots == doctest::Approx(20.0));
}

TEST_CASE("no outage: one transmission of everything") {
  for (int n = 1; n <= 6; ++n) {
    const auto plan = PlanMessage(n, AgingKind::kExponential, Model(100, 0), 0, 50, 3, 0);
    CHECK(plan.splits == std::vector<int>{n});
    CHECK(plan.expected_slots == 1.0);
    CHECK(ExpectedSlots(std::vector<int>(n, 1), Model(100, 0), 0) == n);
  }
}

TEST_CASE("expected age is the aging function at the expected completion") {
  const auto plan = PlanMessage(1, AgingKind::kLinear, Model(100, 0), 0, 50, 7, 4);
  CHECK(plan.expected_aoi == doctest::Approx(4.0));  // 7 + 1 - 4
}

TEST_CASE("invalid demand") {
  CHECK_THROWS_AS(PlanMessage(0, AgingKind::kLinear, Model(100, 1), 0, 50, 3, 0),
                  std::domain_error);
  CHECK_THROWS_AS(PlanMessage(6, AgingKind::kLinear, Model(100, 1), 0, 5, 3, 0),
                  std::domain_error);
}

TEST_CASE("plans never take less than one slot and match the enumeration oracle") {
  for (double snr : {10.0, 100.0}) {
    for (double eps : {0.1, 1.0, 5.0, 20.0}) {
      for (int n = 1; n <= 5; ++n) {
        const auto plan = PlanMessage(n, AgingKind::kLinear, Model(snr, eps), 0, 50, 9, 2);
        const auto ref = oracle::BestPlan(n, snr, eps);
        CHECK(plan.expected_slots >= 1.0);
        CHECK(plan.splits == ref.splits);
        CHECK(plan.expected_slots == doctest::Approx(ref.expected_slots).epsilon(1e-12));
        int total = 0;
        for (int part : plan.splits) total += part;
        CHECK(total == n);
      }
    }
  }
}

}  // TEST_SUITE
