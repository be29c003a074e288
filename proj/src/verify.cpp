#include "aoisim/verify.hpp"

#include <cmath>
#include <sstream>

#include "aoisim/core_model.hpp"
#include "aoisim/engine.hpp"
#include "aoisim/rng.hpp"

namespace aoisim {

std::vector<PayoffCell> PayoffTable(const GameParams& params) {
  const std::vector<double> future_aoi = {3.0, 2.0};
  const std::vector<bool> active = {true, true};
  const GameInstance game = GameInstance::FullInformation(future_aoi, active, 2, params);

  const double rho = params.rho;
  const double shared = -params.gamma;
  const double silent = -(params.gamma + params.eta);
  auto expected = [&](Action mine, Action other) {
    if (mine == kSilent) return silent;
    return mine == other ? shared : rho;
  };

  std::vector<PayoffCell> cells;
  for (Action x2 : {1, 2, kSilent}) {
    for (Action x1 : {1, 2, kSilent}) {
      const std::vector<Action> actions = {x1, x2};
      PayoffCell cell;
      cell.x1 = x1;
      cell.x2 = x2;
      cell.payoff1 = Payoff(actions, 0, game.players, params);
      cell.payoff2 = Payoff(actions, 1, game.players, params);
      cell.expected1 = expected(x1, x2);
      cell.expected2 = expected(x2, x1);
      cell.equilibrium = CheckNashEquilibrium(game, actions).is_equilibrium;
      cells.push_back(cell);
    }
  }
  return cells;
}

CheckResult VerifyPayoffTable(const GameParams& params) {
  CheckResult result{"payoff table N=R=2", true, ""};
  int matching = 0;
  std::vector<std::string> equilibria;
  for (const PayoffCell& c : PayoffTable(params)) {
    if (c.payoff1 == c.expected1 && c.payoff2 == c.expected2) {
      ++matching;
    } else {
      result.passed = false;
    }
    if (c.equilibrium) {
      equilibria.push_back("[" + std::to_string(c.x1) + "," + std::to_string(c.x2) + "]");
    }
  }
  const std::vector<std::string> wanted = {"[2,1]", "[1,2]"};
  if (equilibria != wanted) result.passed = false;
  std::ostringstream detail;
  detail << matching << "/9 cells match; equilibria:";
  for (const auto& e : equilibria) detail << ' ' << e;
  result.detail = detail.str();
  return result;
}

std::vector<ServiceRateRow> ServiceRateTable(std::uint64_t seed, int slots) {
  const std::vector<std::pair<int, int>> cases = {{2, 2}, {10, 50}, {50, 50}, {200, 50}};
  std::vector<ServiceRateRow> rows;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto [transmitters, num_rbs] = cases[k];
    Rng rng(StreamSeed(seed, 100 + k));
    std::vector<Action> actions(transmitters);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < slots; ++s) {
      for (Action& a : actions) a = RandomSelection(num_rbs, rng);
      const double rate = MeasuredServiceRate(actions, num_rbs);
      sum += rate;
      sum_sq += rate * rate;
    }
    ServiceRateRow row;
    row.transmitters = transmitters;
    row.num_rbs = num_rbs;
    row.slots = slots;
    row.empirical = sum / slots;
    const double var = slots > 1 ? (sum_sq - sum * row.empirical) / (slots - 1) : 0.0;
    row.standard_error = std::sqrt(std::max(var, 0.0) / slots);
    row.closed_form = ServiceRateClosedForm(transmitters, num_rbs);
    rows.push_back(row);
  }
  return rows;
}

CheckResult VerifyServiceRate(std::uint64_t seed, int slots) {
  CheckResult result{"random selection service rate", true, ""};
  std::ostringstream detail;
  for (const ServiceRateRow& row : ServiceRateTable(seed, slots)) {
    const double diff = std::abs(row.empirical - row.closed_form);
    if (diff > 0.01) result.passed = false;
    detail << "(T=" << row.transmitters << ",R=" << row.num_rbs << ") "
           << row.empirical << " vs " << row.closed_form << "; ";
  }
  result.detail = detail.str();
  return result;
}

ConvergenceStudy RunConvergenceStudy(std::uint64_t seed, int num_devices, int runs,
                                     int horizon) {
  ConvergenceStudy study;
  study.num_devices = num_devices;
  study.horizon = horizon;

  ScenarioConfig config;
  config.num_devices = num_devices;
  config.num_rbs = num_devices;
  config.v_a = 1.0;
  config.epsilon = 0.0;
  config.mode = Mode::kDistributedSca;
  config.comm_range = std::hypot(config.width, config.length) + 1.0;
  config.slots = horizon;

  for (int r = 0; r < runs; ++r) {
    config.seed = StreamSeed(seed, static_cast<std::uint64_t>(r));
    Simulation sim(config);
    ConvergenceRun run;
    run.seed = config.seed;
    run.stays_full = true;
    for (int t = 1; t <= horizon; ++t) {
      const SlotRecord rec = sim.Step();
      run.unused_rbs.push_back(rec.unused_rbs);
      const bool full = rec.service_rate == 1.0;
      if (full && run.first_full_slot < 0) run.first_full_slot = t;
      if (!full && run.first_full_slot >= 0) run.stays_full = false;
    }
    if (run.first_full_slot < 0) run.stays_full = false;
    const GameInstance game =
        GameInstance::FullInformation(sim.decision_future_aoi(), sim.decision_active(),
                                      config.num_rbs, config.game_params());
    run.terminal_equilibrium = CheckNashEquilibrium(game, sim.last_actions()).is_equilibrium;
    study.runs.push_back(std::move(run));
  }

  const double n = num_devices;
  const double r_count = num_devices;
  for (int t = 1; t <= horizon; ++t) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const ConvergenceRun& run : study.runs) {
      const double u = run.unused_rbs[t - 1];
      sum += u;
      sum_sq += u * u;
    }
    const double m = runs > 0 ? sum / runs : 0.0;
    const double var = runs > 1 ? (sum_sq - sum * m) / (runs - 1) : 0.0;
    study.mean_unused.push_back(m);
    study.se_unused.push_back(runs > 0 ? std::sqrt(std::max(var, 0.0) / runs) : 0.0);
    study.unused_bound.push_back(r_count * std::pow((r_count - 1.0) / r_count, n * (t - 1)));
  }
  return study;
}

std::vector<CheckResult> VerifyConvergence(const ConvergenceStudy& study, int min_converged) {
  int converged = 0;
  int equilibria = 0;
  int latest = 0;
  for (const ConvergenceRun& run : study.runs) {
    if (run.first_full_slot > 0 && run.stays_full && run.terminal_equilibrium) ++converged;
    if (run.terminal_equilibrium) ++equilibria;
    latest = std::max(latest, run.first_full_slot);
  }
  std::ostringstream conv;
  conv << converged << "/" << study.runs.size() << " runs at service rate 1 within "
       << study.horizon << " slots (latest first hit " << latest << "), " << equilibria
       << " terminal equilibria";
  CheckResult convergence{"crowd avoidance convergence N=R=" + std::to_string(study.num_devices),
                          converged >= min_converged, conv.str()};

  int violations = 0;
  int first_violation = -1;
  double worst = 0.0;
  for (std::size_t k = 0; k < study.mean_unused.size(); ++k) {
    const double excess =
        study.mean_unused[k] - (study.unused_bound[k] + 3.0 * study.se_unused[k]);
    if (excess > 0.0) {
      ++violations;
      if (first_violation < 0) first_violation = static_cast<int>(k) + 1;
      worst = std::max(worst, excess);
    }
  }
  std::ostringstream decay;
  decay << violations << " slots above bound + 3se";
  if (first_violation > 0) {
    const auto k = static_cast<std::size_t>(first_violation - 1);
    decay << "; first at t=" << first_violation << " (mean " << study.mean_unused[k]
          << ", bound " << study.unused_bound[k] << ", se " << study.se_unused[k]
          << "); worst excess " << worst;
  }
  CheckResult bound{"unused RB decay bound N=R=" + std::to_string(study.num_devices),
                    violations == 0, decay.str()};
  return {convergence, bound};
}

CheckResult VerifyPairedPolicies(int max_aoi) {
  CheckResult result{"future vs current age, two devices", true, ""};
  int cases = 0;
  int disagreements = 0;
  for (int beta = 1; beta <= 3; ++beta) {
    const double threshold = beta / (std::exp2(beta) - 1.0);
    for (int a = 1; a <= max_aoi; ++a) {
      for (int b = 1; b <= max_aoi; b *= 2) {
        ++cases;
        const PairedPolicyOutcome o = ComparePairedPolicies(a, b, beta);
        if (o.future_policy_avg > o.current_policy_avg) result.passed = false;
        if (o.disagree()) {
          ++disagreements;
          if (!(o.future_policy_avg < o.current_policy_avg)) result.passed = false;
          if (!(b > threshold)) result.passed = false;
        }
      }
    }
  }
  result.detail = std::to_string(cases) + " cases, " + std::to_string(disagreements) +
                  " disagreements";
  return result;
}

std::vector<CheckResult> VerifyAll(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(VerifyPayoffTable());
  out.push_back(VerifyServiceRate(seed));
  for (CheckResult& r : VerifyConvergence(RunConvergenceStudy(seed), 99)) {
    out.push_back(std::move(r));
  }
  out.push_back(VerifyPairedPolicies());
  return out;
}

}  // namespace aoisim
