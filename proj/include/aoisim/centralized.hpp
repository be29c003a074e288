#ifndef AOISIM_CENTRALIZED_HPP_
#define AOISIM_CENTRALIZED_HPP_

#include <optional>
#include <span>
#include <vector>

#include "aoisim/channel.hpp"
#include "aoisim/core_model.hpp"
#include "aoisim/rng.hpp"

namespace aoisim {

struct RachConfig {
  int preambles = 64;
  // Draw a preamble per device and fail every shared preamble, instead of
  // thinning each request independently with the collision probability.
  bool exact_preambles = false;
};

// Probability that a given requester shares its preamble with at least one
// of the other n_active - 1 requesters.
double RachCollisionProbability(int n_active, int preambles);

struct UplinkRequest {
  int device_id = 0;
  double current_aoi = 1.0;  // C_i
  int rbs_needed = 1;        // R_{i,t}
  // Set by the simulator only when the base station is granted full knowledge
  // of the pending message.
  std::optional<AgingKind> disclosed_aging;
};

// Requests that make it through the random access phase, in input order.
std::vector<UplinkRequest> RachPhase(std::span<const UplinkRequest> requests,
                                     const RachConfig& config, Rng& rng);

struct RequestObservation {
  Slot slot = 0;
  double aoi = 0.0;
};

// Infers the aging function of a pending message from its reported age.
// Linear ages cover every positive integer, exponential ones only powers of
// two, so a non-power-of-two age is linear. Otherwise a previous report for
// the same message at an earlier slot settles it when exactly one aging
// function explains the growth.
std::optional<AgingKind> IdentifyAging(double current_aoi, Slot now,
                                       const std::optional<RequestObservation>& previous);

bool IsPowerOfTwo(double value);

struct ObservationCounts {
  long linear = 0;
  long exponential = 0;

  long total() const { return linear + exponential; }
};

// Maximum-likelihood type from identified aging functions. Equal likelihoods
// resolve to type 2.
TypeId LearnType(const ObservationCounts& counts, double m1, double m2);

struct TypePriors {
  double m1 = 0.75;
  double m2 = 0.75;
  double type1_fraction = 0.6;
};

class TypeLearner {
 public:
  TypeLearner(int num_devices, TypePriors priors);

  void Record(int device_id, AgingKind kind);
  const ObservationCounts& counts(int device_id) const { return counts_.at(device_id); }
  // nullopt until the device has at least one identified observation.
  std::optional<TypeId> Estimate(int device_id) const;
  const TypePriors& priors() const { return priors_; }

 private:
  TypePriors priors_;
  std::vector<ObservationCounts> counts_;
};

// Expected age beta slots after the current age c for a device of the given
// type. With beta = 1 this is m(c + 1) + (1 - m)(2c) for the dominant kind m.
double ExpectedFutureAoi(double c, TypeId type, double m1, double m2, int beta = 1);

// Same expectation averaged over the type marginals.
double MarginalExpectedFutureAoi(double c, const TypePriors& priors, int beta = 1);

// Exact future age of a message of known kind that is c old now.
double ExactFutureAoi(double c, AgingKind kind, int beta);

// One request ranked for allocation.
struct PriorityEntry {
  int device_id = 0;
  double key = 0.0;
  // Type used to order equal keys; faster aging types go first.
  std::optional<TypeId> type;
  int rbs_needed = 1;
};

// Serves entries by decreasing key, type 2 before unknown before type 1 on
// equal keys, and grants min(remaining, rbs_needed) contiguous RBs until the
// slot's RBs run out. Remaining ties are broken uniformly when `tie_rng` is
// given, by device id otherwise.
RbAssignment AllocateByPriority(std::vector<PriorityEntry> entries, int num_rbs, Slot slot,
                                Rng* tie_rng);

enum class SchedulerVariant { kNoLearning, kLearning, kFullInfo };

const char* ToString(SchedulerVariant variant);

// Base-station side of the centralized scheme. Keeps the type learner and the
// per-message identification history and ranks each slot's requests.
class CentralizedScheduler {
 public:
  CentralizedScheduler(SchedulerVariant variant, int num_devices, TypePriors priors,
                       int beta, std::vector<TypeId> true_types = {});

  RbAssignment Schedule(std::span<const UplinkRequest> requests, Slot now, int num_rbs,
                        Rng* tie_rng);

  // Priority key and tie type for one request; updates identification state.
  PriorityEntry Rank(const UplinkRequest& request, Slot now);

  // The pending message of `device_id` was fully received. Its content tells
  // the base station the aging kind, which is counted for the learner unless
  // the message was already identified from its requests.
  void OnDelivered(int device_id, std::optional<AgingKind> revealed = std::nullopt);

  const TypeLearner& learner() const { return learner_; }
  SchedulerVariant variant() const { return variant_; }

 private:
  struct MessageHistory {
    std::optional<RequestObservation> last_request;
    std::optional<AgingKind> identified;
  };

  SchedulerVariant variant_;
  int beta_;
  TypeLearner learner_;
  std::vector<TypeId> true_types_;
  std::vector<MessageHistory> history_;
};

}  // namespace aoisim

#endif  // AOISIM_CENTRALIZED_HPP_
