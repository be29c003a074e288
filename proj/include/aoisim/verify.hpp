#ifndef AOISIM_VERIFY_HPP_
#define AOISIM_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aoisim/distributed.hpp"

namespace aoisim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Two-player game with N = R = 2, both devices active and above the
// threshold. One cell per (x1, x2) in {1, 2, 0}^2.
struct PayoffCell {
  Action x1 = kSilent;
  Action x2 = kSilent;
  double payoff1 = 0.0;
  double payoff2 = 0.0;
  double expected1 = 0.0;
  double expected2 = 0.0;
  bool equilibrium = false;
};

std::vector<PayoffCell> PayoffTable(const GameParams& params = {});
CheckResult VerifyPayoffTable(const GameParams& params = {});

// Random RB selection by T transmitters over R RBs, measured over `slots`
// independent slots.
struct ServiceRateRow {
  int transmitters = 0;
  int num_rbs = 0;
  int slots = 0;
  double empirical = 0.0;
  double standard_error = 0.0;
  double closed_form = 0.0;
};

std::vector<ServiceRateRow> ServiceRateTable(std::uint64_t seed, int slots = 10000);
CheckResult VerifyServiceRate(std::uint64_t seed, int slots = 10000);

// Crowd avoidance with N = R, every device always active, full information
// and no outage.
struct ConvergenceRun {
  std::uint64_t seed = 0;
  int first_full_slot = -1;  // first slot with service rate 1, -1 if never
  bool stays_full = false;   // service rate 1 from then on
  bool terminal_equilibrium = false;
  std::vector<int> unused_rbs;  // index t - 1 holds slot t
};

struct ConvergenceStudy {
  int num_devices = 0;
  int horizon = 0;
  std::vector<ConvergenceRun> runs;
  std::vector<double> mean_unused;  // per slot, index t - 1
  std::vector<double> se_unused;
  std::vector<double> unused_bound;  // R((R-1)/R)^(N(t-1))
};

ConvergenceStudy RunConvergenceStudy(std::uint64_t seed, int num_devices = 50, int runs = 100,
                                     int horizon = 200);

// Returns two results: convergence within the horizon with an equilibrium
// at the end, and the unused-RB decay bound with 3 standard errors of slack.
std::vector<CheckResult> VerifyConvergence(const ConvergenceStudy& study, int min_converged);

// Two devices, one RB, no outage: every linear age 1..max_aoi against every
// exponential age 2^k <= max_aoi, for beta in 1..3.
CheckResult VerifyPairedPolicies(int max_aoi = 32);

// Everything above at the default sizes.
std::vector<CheckResult> VerifyAll(std::uint64_t seed);

}  // namespace aoisim

#endif  // AOISIM_VERIFY_HPP_
