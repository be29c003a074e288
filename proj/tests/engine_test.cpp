#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "aoisim/config_io.hpp"
#include "aoisim/engine.hpp"
#include "doctest.h"

using namespace aoisim;

namespace {

const Mode kAllModes[] = {
    Mode::kCentralizedNoLearning, Mode::kCentralizedLearning, Mode::kCentralizedFullInfo,
    Mode::kDistributedSca,        Mode::kDistributedRandom,   Mode::kDistributedPredetermined,
};

ScenarioConfig Saturated(Mode mode) {
  ScenarioConfig c;
  c.num_devices = 50;
  c.num_rbs = 50;
  c.v_a = 1.0;
  c.epsilon = 0.0;
  c.comm_range = 15.0;
  c.mode = mode;
  return c;
}

std::string Csv(const ScenarioConfig& c, const std::vector<SlotRecord>& records) {
  std::ostringstream out;
  WriteRecords(out, OutputFormat::kCsv, c, records);
  return out.str();
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("mode names round trip") {
  for (Mode m : kAllModes) CHECK(ParseMode(ToString(m)) == m);
  CHECK_THROWS_AS(ParseMode("fastest"), ConfigError);
}

TEST_CASE("one device, one RB, no outage") {
  for (Mode m : kAllModes) {
    CAPTURE(ToString(m));
    ScenarioConfig c;
    c.num_devices = 1;
    c.num_rbs = 1;
    c.v_a = 1.0;
    c.epsilon = 0.0;
    c.slots = 100;
    c.mode = m;
    const RunResult r = Run(c);
    REQUIRE(r.records.size() == 100);
    for (const SlotRecord& s : r.records) {
      CHECK(s.deliveries == 1);
      CHECK(s.avg_inst_aoi_cum == 1.0);
    }
    CHECK(r.summary.deliveries == 100);
  }
}

TEST_CASE("random selection with N = R = 50") {
  ScenarioConfig c = Saturated(Mode::kDistributedRandom);
  c.slots = 10000;
  c.warmup_fraction = 0.0;
  const RunResult r = Run(c);
  CHECK(std::abs(r.summary.mean_service_rate - 0.372) < 0.01);
}

TEST_CASE("crowd avoidance with full information settles at service rate 1") {
  ScenarioConfig c = Saturated(Mode::kDistributedSca);
  c.slots = 300;
  const RunResult r = Run(c);
  int first = -1;
  for (const SlotRecord& s : r.records) {
    if (s.service_rate == 1.0 && first < 0) first = static_cast<int>(s.slot);
    if (first >= 0) CHECK(s.service_rate == 1.0);
  }
  CHECK(first > 0);
  CHECK(first <= 200);
}

TEST_CASE("identical configs give identical records") {
  for (Mode m : kAllModes) {
    ScenarioConfig c;
    c.num_devices = 40;
    c.num_rbs = 10;
    c.slots = 300;
    c.comm_range = 15.0;
    c.mode = m;
    c.seed = 99;
    CHECK(Csv(c, Run(c).records) == Csv(c, Run(c).records));
  }
}

TEST_CASE("different seeds differ") {
  ScenarioConfig c;
  c.slots = 200;
  ScenarioConfig d = c;
  d.seed = 2;
  CHECK(Csv(c, Run(c).records) != Csv(c, Run(d).records));
}

TEST_CASE("per-slot bookkeeping") {
  for (Mode m : kAllModes) {
    CAPTURE(ToString(m));
    ScenarioConfig c;
    c.num_devices = 60;
    c.num_rbs = 20;
    c.v_a = 0.4;
    c.epsilon = 5.0;
    c.slots = 500;
    c.comm_range = 15.0;
    c.mode = m;
    if (IsCentralized(m)) c.max_rbs_per_message = 3;
    for (const SlotRecord& s : Run(c).records) {
      CHECK(s.n_transmitting == s.successes + s.duplicate_failures + s.outage_failures);
      CHECK(s.service_rate >= 0.0);
      CHECK(s.service_rate <= 1.0);
      CHECK(s.n_active <= c.num_devices);
      CHECK(s.n_transmitting <= c.num_devices);
      CHECK(s.rach_failures <= c.num_devices);
      CHECK(s.deliveries <= s.successes);
      CHECK(s.unused_rbs >= 0);
      if (IsCentralized(m)) {
        CHECK(s.duplicate_failures == 0);
      } else {
        CHECK(s.rach_failures == 0);
      }
    }
  }
}

TEST_CASE("cumulative age stays finite on long small runs") {
  for (Mode m : kAllModes) {
    CAPTURE(ToString(m));
    ScenarioConfig c;
    c.num_devices = 10;
    c.num_rbs = 5;
    c.v_a = 0.3;
    c.slots = 5000;
    c.comm_range = 15.0;
    c.mode = m;
    const RunResult r = Run(c);
    CHECK(std::isfinite(r.records.back().avg_inst_aoi_cum));
    CHECK(r.summary.deliveries > 0);
  }
}

TEST_CASE("invalid configs are rejected before the first slot") {
  ScenarioConfig c;
  c.num_rbs = 0;
  CHECK_THROWS_AS(Run(c), ConfigError);
  c = {};
  c.v_a = 1.5;
  CHECK_THROWS_AS(Run(c), ConfigError);
  c = {};
  c.width = 0.0;
  CHECK_THROWS_AS(Run(c), ConfigError);
  c = {};
  c.mode = Mode::kDistributedSca;
  c.max_rbs_per_message = 2;
  CHECK_THROWS_AS(Run(c), ConfigError);
  c = {};
  c.mode = Mode::kDistributedPredetermined;
  c.comm_range = 1.0;
  CHECK_THROWS_AS(Simulation{c}, ConfigError);
}

TEST_CASE("config fields by name") {
  ScenarioConfig c;
  SetConfigValue(c, "N", "12");
  SetConfigValue(c, "r_c", "7.5");
  SetConfigValue(c, "mode", "distributed_sca");
  SetConfigValue(c, "exact_preambles", "true");
  SetConfigValue(c, "snr_min_db", "17");
  CHECK(c.num_devices == 12);
  CHECK(c.comm_range == 7.5);
  CHECK(c.mode == Mode::kDistributedSca);
  CHECK(c.exact_preambles);
  CHECK(c.snr_min_db == 17.0);
  SetConfigValue(c, "snr_min_db", "none");
  CHECK_FALSE(c.snr_min_db.has_value());
  CHECK_THROWS_AS(SetConfigValue(c, "warp", "9"), ConfigError);
  CHECK_THROWS_AS(SetConfigValue(c, "slots", "ten"), ConfigError);
  CHECK_THROWS_AS(SetConfigValue(c, "v_a", "0.3x"), ConfigError);

  for (const std::string& key : ConfigKeys()) {
    ScenarioConfig copy;
    SetConfigValue(copy, key, GetConfigValue(c, key));
    CHECK(GetConfigValue(copy, key) == GetConfigValue(c, key));
  }
}

TEST_CASE("sweeps") {
  ScenarioConfig base;
  base.num_devices = 30;
  base.num_rbs = 10;
  base.slots = 200;

  SUBCASE("single point equals a plain run") {
    const auto points = Sweep(base, "v_a", {"0.3"}, 1);
    REQUIRE(points.size() == 1);
    CHECK(points[0].seed == base.seed);
    CHECK(Csv(base, points[0].result.records) == Csv(base, Run(base).records));
  }
  SUBCASE("ordering does not depend on parallelism") {
    const std::vector<std::string> values = {"0.1", "0.2", "0.4"};
    const auto serial = Sweep(base, "v_a", values, 3, 1);
    const auto parallel = Sweep(base, "v_a", values, 3, 4);
    REQUIRE(serial.size() == 9);
    REQUIRE(parallel.size() == 9);
    for (std::size_t k = 0; k < serial.size(); ++k) {
      CHECK(serial[k].value == parallel[k].value);
      CHECK(serial[k].replicate == parallel[k].replicate);
      CHECK(serial[k].seed == parallel[k].seed);
      CHECK(Csv(base, serial[k].result.records) == Csv(base, parallel[k].result.records));
    }
    CHECK(serial[0].value == "0.1");
    CHECK(serial[3].value == "0.2");
    CHECK(serial[4].replicate == 1);
  }
  SUBCASE("replicate seeds are distinct") {
    const auto points = Sweep(base, "v_a", {"0.1", "0.2"}, 3, 1, false);
    std::map<std::uint64_t, int> seen;
    for (const auto& p : points) ++seen[p.seed];
    CHECK(seen.size() == points.size());
    CHECK(points[0].result.records.empty());
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(Sweep(base, "warp", {"1"}, 1), ConfigError);
    CHECK_THROWS_AS(Sweep(base, "seed", {"1"}, 1), ConfigError);
    CHECK_THROWS_AS(Sweep(base, "v_a", {"2"}, 1), ConfigError);
    CHECK_THROWS_AS(Sweep(base, "v_a", {}, 1), ConfigError);
  }
  SUBCASE("aggregation") {
    const auto agg = AggregateSweep(Sweep(base, "v_a", {"0.1", "0.3"}, 4));
    REQUIRE(agg.size() == 2);
    CHECK(agg[0].replicates == 4);
    CHECK(agg[1].value == "0.3");
    CHECK(agg[0].mean_inst_aoi_se >= 0.0);
  }
}

TEST_CASE("warm-up summary") {
  std::vector<SlotRecord> recs(10);
  for (int k = 0; k < 10; ++k) {
    recs[k].slot = k + 1;
    recs[k].service_rate = k < 5 ? 0.0 : 1.0;
    recs[k].deliveries = 1;
    recs[k].avg_inst_aoi_slot = k < 5 ? 10.0 : 2.0;
  }
  const RunSummary s = Summarize(recs, 5);
  CHECK(s.mean_service_rate == doctest::Approx(0.5));
  CHECK(s.mean_service_rate_post_warmup == doctest::Approx(1.0));
  CHECK(s.mean_inst_aoi == doctest::Approx(6.0));
  CHECK(s.mean_inst_aoi_post_warmup == doctest::Approx(2.0));
}

}  // TEST_SUITE
