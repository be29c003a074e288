#ifndef AOISIM_DISTRIBUTED_HPP_
#define AOISIM_DISTRIBUTED_HPP_

#include <optional>
#include <span>
#include <vector>

#include "aoisim/rng.hpp"

namespace aoisim {

struct GameParams {
  double rho = 2.0;    // reward for an uncontended transmission
  double gamma = 1.0;  // penalty for a shared RB
  double eta = 0.5;    // tie offset in the stay-silent payoff, in (0, 1)
  double zeta = 1.2;   // inflation of N * v_a when estimating |A|
  double comm_range = 10.0;

  void Validate() const;  // throws std::invalid_argument
};

// 0 means stay silent, 1..R names an RB.
using Action = int;
inline constexpr Action kSilent = 0;

// Transmit threshold rank. Full information gives R; otherwise
// ceil(R * |A_i| / (N v_a zeta)) clamped to [1, |A_i|]. The |A| estimate
// N v_a zeta is capped at N since no more than N devices can be active.
int Kappa(int known_active, int num_rbs, int num_devices, double v_a, double zeta,
          bool full_information);

// k-th largest of `values` (1-based). Returns -infinity when k exceeds the
// number of values, so that every known device clears the threshold.
double KthLargest(std::span<const double> values, int k);

// F_i >= A_i(kappa).
bool TransmitDecision(double future_aoi, std::span<const double> known_future_aoi, int kappa);

struct PlayerState {
  bool active = false;
  double future_aoi = 0.0;
  double threshold = 0.0;  // A_i(kappa)
};

// Payoff of staying silent: rho + eta for an idle device or an active one
// below its threshold, -(gamma + eta) for an active one at or above it.
double NotTransmitPayoff(const PlayerState& player, const GameParams& params);

// Payoff of player i under the joint action vector.
double Payoff(std::span<const Action> actions, int i, std::span<const PlayerState> players,
              const GameParams& params);

// One round of the game as seen with full information: every player shares
// the same A, and kappa = R.
struct GameInstance {
  int num_rbs = 1;
  std::vector<PlayerState> players;
  GameParams params;
  bool full_information = true;

  static GameInstance FullInformation(std::span<const double> future_aoi,
                                      const std::vector<bool>& active, int num_rbs,
                                      const GameParams& params);
};

struct Deviation {
  int device = 0;
  Action action = kSilent;
  double gain = 0.0;
};

struct NashCheck {
  bool is_equilibrium = false;
  std::optional<Deviation> witness;  // set when is_equilibrium is false
  bool structural = false;
};

// Structural characterisation of equilibria: idle and below-threshold devices
// are silent, every device at or above the threshold transmits, and either no
// RB is shared (when at most R devices clear the threshold) or no RB is left
// free (when ties push more than R devices over it).
bool StructuralEquilibrium(const GameInstance& game, std::span<const Action> actions);

// Exhaustive unilateral-deviation check over {0} and all RBs, cross-checked
// against StructuralEquilibrium. Throws std::domain_error without full
// information and std::logic_error if the two tests disagree.
NashCheck CheckNashEquilibrium(const GameInstance& game, std::span<const Action> actions);

struct Peer {
  int id = 0;
  double future_aoi = 0.0;
};

// Picks a peer with probability proportional to its future age; nullopt if
// `candidates` is empty or every weight is zero.
std::optional<int> ChooseDelegate(std::span<const Peer> candidates, Rng& rng);

// What a device knows when running one crowd-avoidance step.
struct ScaInput {
  Action last_action = kSilent;
  bool last_success = false;
  bool active = false;
  bool wants_to_transmit = false;  // outcome of TransmitDecision
  // Devices within range, the device included, that used last_action in the
  // previous slot.
  int known_claimants = 1;
  std::span<const int> unused_rbs;  // RB numbers 1..R idle in the previous slot
  int num_rbs = 1;
  std::span<const Peer> delegate_candidates;
};

struct ScaDecision {
  Action action = kSilent;
  std::optional<int> delegate_to;  // peer id receiving last_action
};

// One crowd-avoidance step:
//  - success and still active: keep the RB;
//  - success and now idle: hand the RB to a peer chosen by future age;
//  - failure: keep the RB with probability 1 / max(known_claimants, 2),
//    otherwise draw from the unused RBs;
//  - silent last slot: draw from the unused RBs.
// Failures are always blamed on contention, so a device that sees no other
// claimant still assumes one hidden rival. Draws from an empty unused set fall
// back to all R RBs.
ScaDecision ScaStep(const ScaInput& input, Rng& rng);

// Uniform draw over 1..R.
Action RandomSelection(int num_rbs, Rng& rng);

// RB for the device of 1-based rank `rank` by future age, or silent when the
// rank exceeds R. Throws std::domain_error without full information.
Action PredeterminedSelection(int rank, int num_rbs, bool full_information);

// Expected fraction of RBs held by exactly one of T uniformly choosing
// transmitters: (T/R)((R-1)/R)^(T-1).
double ServiceRateClosedForm(int transmitters, int num_rbs);

// Large-population form (T/(R-1)) exp(-T/R). Throws std::domain_error for R = 1.
double ServiceRateLargeN(int transmitters, int num_rbs);

// Fraction of the R RBs claimed by exactly one action.
double MeasuredServiceRate(std::span<const Action> actions, int num_rbs);

}  // namespace aoisim

#endif  // AOISIM_DISTRIBUTED_HPP_
