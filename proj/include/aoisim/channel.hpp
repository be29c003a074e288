#ifndef AOISIM_CHANNEL_HPP_
#define AOISIM_CHANNEL_HPP_

#include <vector>

#include "aoisim/core_model.hpp"
#include "aoisim/rng.hpp"

namespace aoisim {

// Rayleigh block fading with AWGN. The received power is exponential with
// mean lambda_inv; a transmission spread over r RBs splits that power r ways.
struct ChannelModel {
  double lambda_inv = 0.1;
  double sigma2 = 0.001;
  double epsilon = 1.0;
  // Linear mean SNR per device id; overrides lambda_inv / sigma2 when set.
  std::vector<double> per_device_mean_snr;

  double MeanSnr(int device_id) const;
  void Validate() const;  // throws std::invalid_argument

  static ChannelModel FromMeanSnrDb(double snr_db, double epsilon);
};

double DbToLinear(double db);

// 1 - exp(-r * epsilon / mean_snr). Throws std::domain_error when r < 1.
double OutageProbability(const ChannelModel& model, int device_id, int r_simultaneous);

struct RbGrant {
  int device_id = 0;
  std::vector<int> rbs;  // RB indices in [0, R)
};

struct RbAssignment {
  Slot slot = 0;
  std::vector<RbGrant> entries;

  // Throws std::domain_error on a repeated device, an empty RB set, an RB
  // listed twice for one device or an index outside [0, num_rbs).
  void Validate(int num_rbs) const;
};

enum class TxOutcome { kSuccess, kDuplicateFailure, kOutageFailure };

// Outcome per entry of `assignment`, in entry order. Every claimant of an RB
// that another device also uses fails; the rest succeed unless the channel is
// in outage for their RB count. Multi-RB transmissions succeed or fail whole.
std::vector<TxOutcome> ResolveSlot(const RbAssignment& assignment,
                                   const ChannelModel& model, int num_rbs, Rng& rng);

}  // namespace aoisim

#endif  // AOISIM_CHANNEL_HPP_
