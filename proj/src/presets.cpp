#include "aoisim/presets.hpp"

#include <cmath>
#include <ostream>

#include "aoisim/verify.hpp"
#include "json.hpp"

namespace aoisim {

namespace {

const std::vector<std::string> kActivation = {"0.1", "0.2", "0.3", "0.4", "0.5"};
const std::vector<std::string> kEpsilon = {"1", "2", "4", "8", "12", "16", "20"};

std::vector<PresetSeries> CentralizedSeries() {
  return {
      {"full_info", {{"mode", "centralized_full_info"}}},
      {"learning", {{"mode", "centralized_learning"}}},
      {"no_learning", {{"mode", "centralized_no_learning"}}},
  };
}

std::vector<PresetSeries> DistributedSeries() {
  return {
      {"sca", {{"mode", "distributed_sca"}}},
      {"random", {{"mode", "distributed_random"}}},
      {"predetermined", {{"mode", "distributed_predetermined"}, {"comm_range", "15"}}},
  };
}

std::vector<PresetSeries> SaturatedSeries() {
  return {
      {"sca", {{"mode", "distributed_sca"}}},
      {"random", {{"mode", "distributed_random"}}},
  };
}

std::vector<PresetSeries> BetaSeries() {
  std::vector<PresetSeries> s = CentralizedSeries();
  s.push_back({"sca", {{"mode", "distributed_sca"}}});
  return s;
}

std::vector<PresetSeries> MixedSeries() {
  return {
      {"learning", {{"mode", "centralized_learning"}}},
      {"sca_rc5", {{"mode", "distributed_sca"}, {"comm_range", "5"}}},
      {"sca_rc10", {{"mode", "distributed_sca"}, {"comm_range", "10"}}},
      {"sca_rc15", {{"mode", "distributed_sca"}, {"comm_range", "15"}}},
  };
}

Overrides Join(Overrides a, const Overrides& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Preset> BuildPresets() {
  const Overrides massive = {{"num_devices", "200"}, {"epsilon", "1"}, {"slots", "2000"}};
  const Overrides spread = {{"snr_min_db", "17"}, {"snr_max_db", "21.8"}};
  const Overrides distributed = Join(massive, {{"comm_range", "10"}});
  const Overrides saturated = {{"num_devices", "50"}, {"v_a", "1"},  {"epsilon", "1"},
                               {"comm_range", "10"},  {"slots", "1000"}};
  const std::vector<std::string> busy = {"0.25", "0.35", "0.45"};
  const std::vector<std::string> thresholds = {"1", "5", "10", "15", "20"};

  std::vector<Preset> p;
  p.push_back({"fig1", "centralized schemes, varying activation probability",
               PresetKind::kSweep, massive, "v_a", kActivation, CentralizedSeries(), 3});
  p.push_back({"fig2", "centralized schemes with spread transmit powers, varying activation",
               PresetKind::kSweep, Join(massive, spread), "v_a", kActivation,
               CentralizedSeries(), 3});
  p.push_back({"fig3", "centralized schemes, varying outage threshold", PresetKind::kSweep,
               Join(massive, {{"v_a", "0.2"}}), "epsilon", kEpsilon, CentralizedSeries(), 3});
  p.push_back({"fig4", "distributed schemes, varying activation probability",
               PresetKind::kSweep, distributed, "v_a", busy, DistributedSeries(), 3});
  p.push_back({"fig5", "distributed schemes with spread transmit powers, varying activation",
               PresetKind::kSweep, Join(distributed, spread), "v_a", busy,
               DistributedSeries(), 3});
  p.push_back({"fig6", "distributed schemes with N = R, varying outage threshold",
               PresetKind::kTrajectory, saturated, "epsilon", {"1", "3", "5"},
               SaturatedSeries(), 1});
  p.push_back({"fig7", "distributed schemes with N = R, varying communication range",
               PresetKind::kTrajectory, saturated, "comm_range", {"1", "5", "10", "15"},
               SaturatedSeries(), 1});
  p.push_back({"fig8", "centralized and distributed schemes, varying beta", PresetKind::kSweep,
               {{"num_devices", "100"},
                {"v_a", "1"},
                {"epsilon", "1"},
                {"comm_range", "10"},
                {"slots", "2000"}},
               "beta", {"1", "2", "3", "4", "5"}, BetaSeries(), 3});
  p.push_back({"fig9", "centralized against distributed, varying activation probability",
               PresetKind::kSweep, massive, "v_a", kActivation, MixedSeries(), 3});
  p.push_back({"fig10", "centralized against distributed, varying outage threshold",
               PresetKind::kSweep, Join(massive, {{"v_a", "0.5"}}), "epsilon", thresholds,
               MixedSeries(), 3});
  p.push_back({"fig11", "centralized against distributed with N = R, varying outage threshold",
               PresetKind::kSweep, Join(saturated, {{"slots", "2000"}}), "epsilon",
               thresholds, MixedSeries(), 3});
  p.push_back({"table1", "payoffs of the two-player game and its equilibria",
               PresetKind::kPayoffTable, {}, "", {}, {}, 1});
  p.push_back({"prop2", "random selection service rate, Monte Carlo against closed form",
               PresetKind::kServiceRate, {{"slots", "10000"}}, "", {}, {}, 1});
  p.push_back({"theorem2", "crowd avoidance convergence with N = R = 50",
               PresetKind::kConvergence, {{"num_devices", "50"}, {"slots", "200"}}, "", {}, {},
               100});
  return p;
}

void WritePayoffTable(std::ostream& out, OutputFormat format, const GameParams& params) {
  const std::vector<PayoffCell> cells = PayoffTable(params);
  if (format == OutputFormat::kJsonl) {
    for (const PayoffCell& c : cells) {
      nlohmann::ordered_json j;
      j["x1"] = c.x1;
      j["x2"] = c.x2;
      j["payoff1"] = c.payoff1;
      j["payoff2"] = c.payoff2;
      j["expected1"] = c.expected1;
      j["expected2"] = c.expected2;
      j["equilibrium"] = c.equilibrium;
      out << j.dump() << "\n";
    }
    return;
  }
  out << "# rho = " << FormatNumber(params.rho) << "\n# gamma = " << FormatNumber(params.gamma)
      << "\n# eta = " << FormatNumber(params.eta) << "\n";
  out << "x1,x2,payoff1,payoff2,expected1,expected2,equilibrium\n";
  for (const PayoffCell& c : cells) {
    out << c.x1 << ',' << c.x2 << ',' << FormatNumber(c.payoff1) << ','
        << FormatNumber(c.payoff2) << ',' << FormatNumber(c.expected1) << ','
        << FormatNumber(c.expected2) << ',' << (c.equilibrium ? 1 : 0) << "\n";
  }
}

void WriteServiceRates(std::ostream& out, OutputFormat format, std::uint64_t seed, int slots) {
  const std::vector<ServiceRateRow> rows = ServiceRateTable(seed, slots);
  if (format == OutputFormat::kJsonl) {
    for (const ServiceRateRow& r : rows) {
      nlohmann::ordered_json j;
      j["transmitters"] = r.transmitters;
      j["num_rbs"] = r.num_rbs;
      j["slots"] = r.slots;
      j["empirical"] = r.empirical;
      j["standard_error"] = r.standard_error;
      j["closed_form"] = r.closed_form;
      j["abs_diff"] = std::abs(r.empirical - r.closed_form);
      out << j.dump() << "\n";
    }
    return;
  }
  out << "# seed = " << seed << "\n# slots = " << slots << "\n";
  out << "transmitters,num_rbs,slots,empirical,standard_error,closed_form,abs_diff\n";
  for (const ServiceRateRow& r : rows) {
    out << r.transmitters << ',' << r.num_rbs << ',' << r.slots << ','
        << FormatNumber(r.empirical) << ',' << FormatNumber(r.standard_error) << ','
        << FormatNumber(r.closed_form) << ',' << FormatNumber(std::abs(r.empirical - r.closed_form))
        << "\n";
  }
}

void WriteConvergence(std::ostream& out, OutputFormat format, std::uint64_t seed,
                      int num_devices, int runs, int horizon) {
  const ConvergenceStudy study = RunConvergenceStudy(seed, num_devices, runs, horizon);
  std::vector<int> full(horizon, 0);
  for (const ConvergenceRun& run : study.runs) {
    if (run.first_full_slot < 0) continue;
    for (int t = run.first_full_slot; t <= horizon; ++t) {
      if (run.unused_rbs[t - 1] == 0) ++full[t - 1];
    }
  }
  auto fraction = [&](int t) { return runs > 0 ? static_cast<double>(full[t - 1]) / runs : 0.0; };
  if (format == OutputFormat::kJsonl) {
    for (int t = 1; t <= horizon; ++t) {
      nlohmann::ordered_json j;
      j["slot"] = t;
      j["mean_unused"] = study.mean_unused[t - 1];
      j["se_unused"] = study.se_unused[t - 1];
      j["bound"] = study.unused_bound[t - 1];
      j["fraction_converged"] = fraction(t);
      out << j.dump() << "\n";
    }
    return;
  }
  out << "# seed = " << seed << "\n# num_devices = " << num_devices << "\n# num_rbs = "
      << num_devices << "\n# runs = " << runs << "\n# slots = " << horizon << "\n";
  out << "slot,mean_unused,se_unused,bound,fraction_converged\n";
  for (int t = 1; t <= horizon; ++t) {
    out << t << ',' << FormatNumber(study.mean_unused[t - 1]) << ','
        << FormatNumber(study.se_unused[t - 1]) << ',' << FormatNumber(study.unused_bound[t - 1])
        << ',' << FormatNumber(fraction(t)) << "\n";
  }
}

}  // namespace

const std::vector<Preset>& Presets() {
  static const std::vector<Preset> presets = BuildPresets();
  return presets;
}

const Preset* FindPreset(const std::string& name) {
  for (const Preset& p : Presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

ScenarioConfig PresetBase(const Preset& preset, const PresetOptions& options) {
  ScenarioConfig config;
  for (const auto& [key, value] : preset.base) SetConfigValue(config, key, value);
  for (const std::string& a : options.assignments) ApplyAssignment(config, a);
  if (options.seed) config.seed = *options.seed;
  if (options.slots) config.slots = *options.slots;
  return config;
}

void RunPreset(const Preset& preset, const PresetOptions& options, std::ostream& out,
               OutputFormat format) {
  const ScenarioConfig base = PresetBase(preset, options);
  const int replicates = options.replicates.value_or(preset.replicates);
  if (replicates < 1) throw ConfigError("replicates must be at least 1");

  switch (preset.kind) {
    case PresetKind::kPayoffTable:
      base.Validate();
      WritePayoffTable(out, format, base.game_params());
      return;
    case PresetKind::kServiceRate:
      base.Validate();
      WriteServiceRates(out, format, base.seed, base.slots);
      return;
    case PresetKind::kConvergence:
      base.Validate();
      WriteConvergence(out, format, base.seed, base.num_devices, replicates, base.slots);
      return;
    case PresetKind::kSweep:
    case PresetKind::kTrajectory:
      break;
  }

  // Validate every series before running any of them.
  std::vector<ScenarioConfig> configs;
  for (const PresetSeries& s : preset.series) {
    ScenarioConfig c = base;
    for (const auto& [key, value] : s.overrides) SetConfigValue(c, key, value);
    for (const std::string& value : preset.values) {
      ScenarioConfig probe = c;
      SetConfigValue(probe, preset.parameter, value);
      probe.Validate();
    }
    configs.push_back(c);
  }

  const bool trajectories = preset.kind == PresetKind::kTrajectory;
  std::vector<SummaryRow> summaries;
  std::vector<TrajectoryRow> paths;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const std::string& label = preset.series[k].label;
    std::vector<SweepPoint> points =
        Sweep(configs[k], preset.parameter, preset.values, replicates, options.jobs,
              trajectories);
    for (SweepPoint& point : points) {
      if (trajectories) {
        paths.push_back({label, preset.parameter, point.value, point.replicate, point.seed,
                         std::move(point.result.records)});
      } else {
        summaries.push_back({label, preset.parameter, point.value, point.replicate, point.seed,
                             point.result.summary});
      }
    }
  }
  if (trajectories) {
    WriteTrajectories(out, format, base, paths);
  } else {
    WriteSummaries(out, format, base, summaries);
  }
}

}  // namespace aoisim
