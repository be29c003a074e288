#ifndef AOISIM_RB_PLANNER_HPP_
#define AOISIM_RB_PLANNER_HPP_

#include <vector>

#include "aoisim/channel.hpp"
#include "aoisim/core_model.hpp"

namespace aoisim {

// How a message needing several RBs is spread over consecutive slots.
// splits[j] RBs are used simultaneously in the j-th transmission; each
// transmission is repeated until it gets through, which takes 1/(1-p) slots
// on average.
struct TransmissionPlan {
  std::vector<int> splits;
  double expected_slots = 0.0;
  double expected_aoi = 0.0;
};

// Expected number of slots to push every part of `splits` through the channel.
double ExpectedSlots(const std::vector<int>& splits, const ChannelModel& model,
                     int device_id);

// Picks the split of n_rbs into consecutive simultaneous transmissions that
// minimises the age at expected completion, tau + ExpectedSlots, measured
// from `delta`. Every composition of n_rbs is enumerated. Ties prefer fewer
// transmissions, then the larger first part.
// Throws std::domain_error unless 1 <= n_rbs <= num_rbs.
TransmissionPlan PlanMessage(int n_rbs, AgingKind aging, const ChannelModel& model,
                             int device_id, int num_rbs, Slot tau, Slot delta);

}  // namespace aoisim

#endif  // AOISIM_RB_PLANNER_HPP_
