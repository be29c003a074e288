#include "aoisim/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace aoisim {

double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }

double ChannelModel::MeanSnr(int device_id) const {
  if (!per_device_mean_snr.empty()) {
    if (device_id < 0 || device_id >= static_cast<int>(per_device_mean_snr.size())) {
      throw std::out_of_range("no mean SNR configured for device " +
                              std::to_string(device_id));
    }
    return per_device_mean_snr[device_id];
  }
  return lambda_inv / sigma2;
}

void ChannelModel::Validate() const {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
  if (!(lambda_inv > 0.0)) throw std::invalid_argument("mean received power must be positive");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("noise variance must be positive");
  for (double snr : per_device_mean_snr) {
    if (!(snr > 0.0)) throw std::invalid_argument("per-device mean SNR must be positive");
  }
}

ChannelModel ChannelModel::FromMeanSnrDb(double snr_db, double epsilon) {
  ChannelModel model;
  model.sigma2 = 0.001;
  model.lambda_inv = DbToLinear(snr_db) * model.sigma2;
  model.epsilon = epsilon;
  return model;
}

double OutageProbability(const ChannelModel& model, int device_id, int r_simultaneous) {
  if (r_simultaneous < 1) {
    throw std::domain_error("OutageProbability: at least one RB required");
  }
  return -std::expm1(-r_simultaneous * model.epsilon / model.MeanSnr(device_id));
}

void RbAssignment::Validate(int num_rbs) const {
  std::unordered_set<int> devices;
  for (const RbGrant& grant : entries) {
    if (!devices.insert(grant.device_id).second) {
      throw std::domain_error("device " + std::to_string(grant.device_id) +
                              " appears twice in an RB assignment");
    }
    if (grant.rbs.empty()) {
      throw std::domain_error("device " + std::to_string(grant.device_id) +
                              " has an empty RB set");
    }
    std::unordered_set<int> own;
    for (int rb : grant.rbs) {
      if (rb < 0 || rb >= num_rbs) {
        throw std::domain_error("RB index " + std::to_string(rb) + " out of range");
      }
      if (!own.insert(rb).second) {
        throw std::domain_error("RB " + std::to_string(rb) + " listed twice for device " +
                                std::to_string(grant.device_id));
      }
    }
  }
}

std::vector<TxOutcome> ResolveSlot(const RbAssignment& assignment,
                                   const ChannelModel& model, int num_rbs, Rng& rng) {
  assignment.Validate(num_rbs);

  std::vector<int> claims(num_rbs, 0);
  for (const RbGrant& grant : assignment.entries) {
    for (int rb : grant.rbs) ++claims[rb];
  }

  std::vector<TxOutcome> outcomes;
  outcomes.reserve(assignment.entries.size());
  for (const RbGrant& grant : assignment.entries) {
    bool collided = false;
    for (int rb : grant.rbs) collided = collided || claims[rb] > 1;
    if (collided) {
      outcomes.push_back(TxOutcome::kDuplicateFailure);
      continue;
    }
    const double p = OutageProbability(model, grant.device_id,
                                       static_cast<int>(grant.rbs.size()));
    outcomes.push_back(rng.Bernoulli(p) ? TxOutcome::kOutageFailure : TxOutcome::kSuccess);
  }
  return outcomes;
}

}  // namespace aoisim
