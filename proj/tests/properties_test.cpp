// Randomised and exhaustive checks of model-wide invariants.

#include <cmath>
#include <vector>

#include "aoisim/core_model.hpp"
#include "aoisim/distributed.hpp"
#include "aoisim/engine.hpp"
#include "aoisim/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aoisim;

namespace {

std::vector<std::vector<Action>> AllProfiles(int n, int r) {
  std::vector<std::vector<Action>> out;
  std::vector<Action> cur(n, 0);
  while (true) {
    out.push_back(cur);
    int k = 0;
    while (k < n && cur[k] == r) cur[k++] = 0;
    if (k == n) break;
    ++cur[k];
  }
  return out;
}

// Every (active, future age) assignment with ages drawn from {1, 2, 4}, so
// that ties at the threshold occur.
std::vector<std::pair<std::vector<bool>, std::vector<double>>> AllStates(int n) {
  std::vector<std::pair<std::vector<bool>, std::vector<double>>> out;
  const double ages[] = {1, 2, 4};
  int combos = 1;
  for (int i = 0; i < n; ++i) combos *= 6;
  for (int code = 0; code < combos; ++code) {
    std::vector<bool> active(n);
    std::vector<double> f(n);
    int c = code;
    for (int i = 0; i < n; ++i) {
      active[i] = (c % 2) == 1;
      f[i] = ages[(c / 2) % 3];
      c /= 6;
    }
    out.emplace_back(active, f);
  }
  return out;
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("structural and exhaustive equilibrium tests agree") {
  const GameParams params;
  long checked = 0;
  long equilibria = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int r = 1; r <= 3; ++r) {
      const auto profiles = AllProfiles(n, r);
      for (const auto& [active, f] : AllStates(n)) {
        const GameInstance g = GameInstance::FullInformation(f, active, r, params);
        for (const auto& x : profiles) {
          // CheckNashEquilibrium throws if the two tests ever disagree.
          const NashCheck c = CheckNashEquilibrium(g, x);
          REQUIRE(c.structural == c.is_equilibrium);
          equilibria += c.is_equilibrium ? 1 : 0;
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 100000);
  CHECK(equilibria > 0);
}

TEST_CASE("equilibria do not depend on payoff scale") {
  const GameParams a{2.0, 1.0, 0.5, 1.2, 10.0};
  const GameParams b{7.0, 0.3, 0.9, 1.2, 10.0};
  for (const auto& [active, f] : AllStates(3)) {
    const GameInstance ga = GameInstance::FullInformation(f, active, 2, a);
    const GameInstance gb = GameInstance::FullInformation(f, active, 2, b);
    for (const auto& x : AllProfiles(3, 2)) {
      REQUIRE(CheckNashEquilibrium(ga, x).is_equilibrium ==
              CheckNashEquilibrium(gb, x).is_equilibrium);
    }
  }
}

TEST_CASE("future-age scheduling never loses to current-age scheduling") {
  for (int beta = 1; beta <= 3; ++beta) {
    for (int a = 1; a <= 32; ++a) {
      for (int b = 1; b <= 32; b *= 2) {
        const PairedPolicyOutcome o = ComparePairedPolicies(a, b, beta);
        // oracle: serve the larger age now, the other beta slots later
        const double lin_first = 0.5 * (a + b * std::exp2(beta));
        const double exp_first = 0.5 * (b + a + beta);
        const bool cur_lin = a > b;
        const bool fut_lin = a + beta > b * std::exp2(beta);
        REQUIRE(o.current_serves_linear == cur_lin);
        REQUIRE(o.future_serves_linear == fut_lin);
        REQUIRE(o.current_policy_avg == (cur_lin ? lin_first : exp_first));
        REQUIRE(o.future_policy_avg == (fut_lin ? lin_first : exp_first));
        CHECK(o.future_policy_avg <= o.current_policy_avg);
        if (o.disagree()) {
          CHECK(o.future_policy_avg < o.current_policy_avg);
          CHECK(b > beta / (std::exp2(beta) - 1.0));
        }
      }
    }
  }
}

TEST_CASE("random selection matches the closed form within 3 sigma") {
  Rng rng(2024);
  const int slots = 10000;
  for (int t : {2, 10, 50, 200}) {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<Action> x(t);
    for (int s = 0; s < slots; ++s) {
      for (Action& a : x) a = RandomSelection(50, rng);
      const double v = MeasuredServiceRate(x, 50);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / slots;
    const double se = std::sqrt((sum_sq / slots - mean * mean) / (slots - 1));
    CAPTURE(t);
    CHECK(std::abs(mean - oracle::ServiceRate(t, 50)) <= 3.0 * se);
  }
}

TEST_CASE("a sole claimant keeps its RB to itself") {
  ScenarioConfig c;
  c.num_devices = 50;
  c.num_rbs = 50;
  c.v_a = 1.0;
  c.epsilon = 0.0;
  c.comm_range = 15.0;
  c.mode = Mode::kDistributedSca;
  for (std::uint64_t seed : {1, 2, 3}) {
    c.seed = seed;
    Simulation sim(c);
    std::vector<Action> prev;
    for (int t = 0; t < 150; ++t) {
      sim.Step();
      const std::vector<Action>& now = sim.last_actions();
      if (!prev.empty()) {
        std::vector<int> before(c.num_rbs + 1, 0), after(c.num_rbs + 1, 0);
        for (Action a : prev) ++before[a];
        for (Action a : now) ++after[a];
        for (int rb = 1; rb <= c.num_rbs; ++rb) {
          if (before[rb] == 1) REQUIRE(after[rb] == 1);
        }
      }
      prev = now;
    }
  }
}

TEST_CASE("ages grow with time") {
  Rng rng(8);
  for (int k = 0; k < 1000; ++k) {
    const double delta = static_cast<double>(rng.UniformIndex(100));
    const double t1 = delta + 1 + static_cast<double>(rng.UniformIndex(30));
    const double t2 = t1 + 1 + static_cast<double>(rng.UniformIndex(30));
    CHECK(AoiValue(AgingKind::kLinear, t1, delta) < AoiValue(AgingKind::kLinear, t2, delta));
    CHECK(AoiValue(AgingKind::kExponential, t1, delta) <
          AoiValue(AgingKind::kExponential, t2, delta));
    CHECK(AoiValue(AgingKind::kLinear, t1, delta) <=
          AoiValue(AgingKind::kExponential, t1, delta) + 1);
  }
}

TEST_CASE("stream seeds are stable and distinct") {
  CHECK(StreamSeed(1, 2) == StreamSeed(1, 2));
  CHECK(StreamSeed(1, 2) != StreamSeed(1, 3));
  CHECK(StreamSeed(1, 2) != StreamSeed(2, 2));
  Rng a(5), b(5);
  for (int k = 0; k < 100; ++k) CHECK(a.NextU64() == b.NextU64());
  Rng c(6);
  for (int k = 0; k < 10000; ++k) {
    const double u = c.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(c.UniformIndex(7) < 7);
  }
}

}  // TEST_SUITE
