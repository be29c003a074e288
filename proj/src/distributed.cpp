#include "aoisim/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace aoisim {

void GameParams::Validate() const {
  if (!(rho > gamma && gamma > 0.0)) throw std::invalid_argument("payoffs need rho > gamma > 0");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  if (!(comm_range >= 0.0)) throw std::invalid_argument("communication range must be >= 0");
}

int Kappa(int known_active, int num_rbs, int num_devices, double v_a, double zeta,
          bool full_information) {
  if (known_active < 1) throw std::invalid_argument("Kappa: no known active device");
  if (full_information) return num_rbs;
  const double estimate = std::min(num_devices * v_a * zeta, static_cast<double>(num_devices));
  if (!(estimate > 0.0)) return known_active;
  const double raw = std::ceil(static_cast<double>(num_rbs) * known_active / estimate);
  return static_cast<int>(std::clamp(raw, 1.0, static_cast<double>(known_active)));
}

double KthLargest(std::span<const double> values, int k) {
  if (k < 1) throw std::invalid_argument("KthLargest: k must be positive");
  if (k > static_cast<int>(values.size())) return -std::numeric_limits<double>::infinity();
  std::vector<double> v(values.begin(), values.end());
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end(), std::greater<>());
  return v[k - 1];
}

bool TransmitDecision(double future_aoi, std::span<const double> known_future_aoi, int kappa) {
  return future_aoi >= KthLargest(known_future_aoi, kappa);
}

double NotTransmitPayoff(const PlayerState& player, const GameParams& params) {
  if (!player.active || player.future_aoi < player.threshold) return params.rho + params.eta;
  return -(params.gamma + params.eta);
}

double Payoff(std::span<const Action> actions, int i, std::span<const PlayerState> players,
              const GameParams& params) {
  const Action own = actions[i];
  if (own == kSilent) return NotTransmitPayoff(players[i], params);
  const auto sharers = std::count(actions.begin(), actions.end(), own);
  return sharers == 1 ? params.rho : -params.gamma;
}

GameInstance GameInstance::FullInformation(std::span<const double> future_aoi,
                                           const std::vector<bool>& active, int num_rbs,
                                           const GameParams& params) {
  if (future_aoi.size() != active.size()) {
    throw std::invalid_argument("FullInformation: size mismatch");
  }
  std::vector<double> known;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i]) known.push_back(future_aoi[i]);
  }
  const double threshold = known.empty() ? 0.0 : KthLargest(known, num_rbs);
  GameInstance game;
  game.num_rbs = num_rbs;
  game.params = params;
  game.full_information = true;
  for (std::size_t i = 0; i < active.size(); ++i) {
    game.players.push_back(PlayerState{active[i], future_aoi[i], threshold});
  }
  return game;
}

namespace {

bool AboveThreshold(const PlayerState& p) { return p.active && p.future_aoi >= p.threshold; }

void CheckActions(const GameInstance& game, std::span<const Action> actions) {
  if (actions.size() != game.players.size()) {
    throw std::invalid_argument("action vector does not match the player count");
  }
  for (Action a : actions) {
    if (a < kSilent || a > game.num_rbs) throw std::invalid_argument("action out of range");
  }
}

}  // namespace

bool StructuralEquilibrium(const GameInstance& game, std::span<const Action> actions) {
  CheckActions(game, actions);
  std::vector<int> load(game.num_rbs + 1, 0);
  int high = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const bool must_transmit = AboveThreshold(game.players[i]);
    if (must_transmit != (actions[i] != kSilent)) return false;
    high += must_transmit ? 1 : 0;
    ++load[actions[i]];
  }
  for (int rb = 1; rb <= game.num_rbs; ++rb) {
    if (high <= game.num_rbs && load[rb] > 1) return false;
    if (high > game.num_rbs && load[rb] == 0) return false;
  }
  return true;
}

NashCheck CheckNashEquilibrium(const GameInstance& game, std::span<const Action> actions) {
  if (!game.full_information) {
    throw std::domain_error("equilibrium check needs full information");
  }
  CheckActions(game, actions);
  NashCheck result;
  result.is_equilibrium = true;
  std::vector<Action> trial(actions.begin(), actions.end());
  for (std::size_t i = 0; i < trial.size() && result.is_equilibrium; ++i) {
    const double current = Payoff(trial, static_cast<int>(i), game.players, game.params);
    const Action own = trial[i];
    for (Action a = kSilent; a <= game.num_rbs; ++a) {
      if (a == own) continue;
      trial[i] = a;
      const double deviated = Payoff(trial, static_cast<int>(i), game.players, game.params);
      if (deviated > current) {
        result.is_equilibrium = false;
        result.witness = Deviation{static_cast<int>(i), a, deviated - current};
        trial[i] = own;
        break;
      }
    }
    trial[i] = own;
  }
  result.structural = StructuralEquilibrium(game, actions);
  if (result.structural != result.is_equilibrium) {
    throw std::logic_error("structural and deviation equilibrium tests disagree");
  }
  return result;
}

std::optional<int> ChooseDelegate(std::span<const Peer> candidates, Rng& rng) {
  double total = 0.0;
  for (const Peer& p : candidates) total += std::max(p.future_aoi, 0.0);
  if (!(total > 0.0)) return std::nullopt;
  const double target = rng.Uniform() * total;
  double acc = 0.0;
  for (const Peer& p : candidates) {
    acc += std::max(p.future_aoi, 0.0);
    if (target < acc) return p.id;
  }
  // Rounding left target at the very top; return the last weighted peer.
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    if (it->future_aoi > 0.0) return it->id;
  }
  return std::nullopt;
}

namespace {

Action DrawUnused(std::span<const int> unused, int num_rbs, Rng& rng) {
  if (unused.empty()) return RandomSelection(num_rbs, rng);
  return unused[rng.UniformIndex(unused.size())];
}

}  // namespace

ScaDecision ScaStep(const ScaInput& input, Rng& rng) {
  ScaDecision out;
  const bool transmitted = input.last_action != kSilent;
  if (transmitted && input.last_success) {
    if (input.active) {
      out.action = input.last_action;
    } else {
      out.delegate_to = ChooseDelegate(input.delegate_candidates, rng);
    }
    return out;
  }
  if (!input.active || !input.wants_to_transmit) return out;
  if (transmitted) {
    const int claimants = std::max(input.known_claimants, 2);
    if (rng.Bernoulli(1.0 / claimants)) {
      out.action = input.last_action;
      return out;
    }
  }
  out.action = DrawUnused(input.unused_rbs, input.num_rbs, rng);
  return out;
}

Action RandomSelection(int num_rbs, Rng& rng) {
  if (num_rbs < 1) throw std::invalid_argument("RandomSelection: R must be positive");
  return 1 + static_cast<Action>(rng.UniformIndex(num_rbs));
}

Action PredeterminedSelection(int rank, int num_rbs, bool full_information) {
  if (!full_information) {
    throw std::domain_error("pre-determined selection needs full information");
  }
  if (rank < 1) throw std::invalid_argument("rank must be positive");
  return rank <= num_rbs ? rank : kSilent;
}

double ServiceRateClosedForm(int transmitters, int num_rbs) {
  if (transmitters < 0 || num_rbs < 1) {
    throw std::invalid_argument("ServiceRateClosedForm: need T >= 0 and R >= 1");
  }
  if (transmitters == 0) return 0.0;
  const double r = num_rbs;
  return transmitters / r * std::pow((r - 1.0) / r, transmitters - 1);
}

double ServiceRateLargeN(int transmitters, int num_rbs) {
  if (num_rbs <= 1) throw std::domain_error("ServiceRateLargeN: needs R > 1");
  if (transmitters < 0) throw std::invalid_argument("ServiceRateLargeN: T must be >= 0");
  const double r = num_rbs;
  return transmitters / (r - 1.0) * std::exp(-transmitters / r);
}

double MeasuredServiceRate(std::span<const Action> actions, int num_rbs) {
  std::vector<int> load(num_rbs + 1, 0);
  for (Action a : actions) {
    if (a < kSilent || a > num_rbs) throw std::invalid_argument("action out of range");
    ++load[a];
  }
  const auto single = std::count(load.begin() + 1, load.end(), 1);
  return static_cast<double>(single) / num_rbs;
}

}  // namespace aoisim
