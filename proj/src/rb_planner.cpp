#include "aoisim/rb_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace aoisim {

namespace {

// Composition of n whose part boundaries are the set bits of `cuts`
// (bit k set means a boundary after unit k+1).
std::vector<int> CompositionFromCuts(int n, std::uint32_t cuts) {
  std::vector<int> parts;
  int run = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (cuts & (1u << k)) {
      parts.push_back(run);
      run = 1;
    } else {
      ++run;
    }
  }
  parts.push_back(run);
  return parts;
}

bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

double ExpectedSlots(const std::vector<int>& splits, const ChannelModel& model,
                     int device_id) {
  double total = 0.0;
  for (int part : splits) total += 1.0 / (1.0 - OutageProbability(model, device_id, part));
  return total;
}

TransmissionPlan PlanMessage(int n_rbs, AgingKind aging, const ChannelModel& model,
                             int device_id, int num_rbs, Slot tau, Slot delta) {
  if (n_rbs < 1 || n_rbs > num_rbs) {
    throw std::domain_error("PlanMessage: RB demand must lie in [1, R]");
  }
  if (n_rbs > 31) throw std::domain_error("PlanMessage: RB demand too large to enumerate");

  TransmissionPlan best;
  bool have_best = false;
  const std::uint32_t count = 1u << (n_rbs - 1);
  for (std::uint32_t cuts = 0; cuts < count; ++cuts) {
    TransmissionPlan candidate;
    candidate.splits = CompositionFromCuts(n_rbs, cuts);
    candidate.expected_slots = ExpectedSlots(candidate.splits, model, device_id);
    candidate.expected_aoi = AoiValue(aging, static_cast<double>(tau) + candidate.expected_slots,
                                      static_cast<double>(delta));
    if (!have_best) {
      best = std::move(candidate);
      have_best = true;
      continue;
    }
    // Both aging functions are increasing, so once ages overflow the
    // expected durations rank the candidates identically.
    const bool finite = std::isfinite(candidate.expected_aoi) && std::isfinite(best.expected_aoi);
    const double lhs = finite ? candidate.expected_aoi : candidate.expected_slots;
    const double rhs = finite ? best.expected_aoi : best.expected_slots;
    bool better;
    if (!NearlyEqual(lhs, rhs)) {
      better = lhs < rhs;
    } else if (candidate.splits.size() != best.splits.size()) {
      better = candidate.splits.size() < best.splits.size();
    } else {
      better = candidate.splits > best.splits;
    }
    if (better) best = std::move(candidate);
  }
  return best;
}

}  // namespace aoisim
