#ifndef AOISIM_CORE_MODEL_HPP_
#define AOISIM_CORE_MODEL_HPP_

#include <cstdint>

#include "aoisim/rng.hpp"

namespace aoisim {

using Slot = std::int64_t;

// How the age of a pending message grows with elapsed slots k:
//   linear       k
//   exponential  2^(k-1)
enum class AgingKind { kLinear, kExponential };

enum class TypeId { kType1, kType2 };

const char* ToString(AgingKind kind);
const char* ToString(TypeId type);

// Latent device class. Type 1 mostly produces linearly aging messages, type 2
// mostly exponentially aging ones.
struct DeviceType {
  TypeId id = TypeId::kType1;
  double p_linear = 0.75;

  double p_exponential() const { return 1.0 - p_linear; }

  // m is the probability of the type's dominant aging kind, in (0.5, 1).
  static DeviceType Type1(double m1);
  static DeviceType Type2(double m2);
};

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double Distance(const Position& a, const Position& b);

struct Device {
  int id = 0;
  Position position;
  DeviceType dtype;
  bool active = false;
  // The fields below describe the pending message and are meaningful only
  // while the device is active.
  AgingKind aging = AgingKind::kLinear;
  int n_rbs = 1;
  int rbs_left = 0;
  Slot gen_slot = 0;
  // Generation slot of the most recent fully received message.
  Slot delta = 0;
};

struct AoiClock {
  Slot current_slot = 0;
  int beta = 1;
};

// Age of a message generated at `delta`, evaluated at `t`. Real-valued t is
// accepted so that expected completion times can be aged directly.
// Throws std::domain_error when t < delta.
double AoiValue(AgingKind kind, double t, double delta);

// Age of the pending message beta slots after the clock's current slot.
// Throws std::domain_error for an idle device.
double FutureAoi(const Device& device, const AoiClock& clock);

// Idle devices generate a message with probability v_a; the message is stamped
// with generation slot `now`. The aging kind is drawn from the device type and
// the RB demand uniformly from 1..max_rbs. Active devices are returned as-is.
Device ActivationStep(Device device, double v_a, Slot now, Rng& rng,
                      int max_rbs = 1);

struct Delivery {
  Device device;
  double aoi = 0.0;  // age of the message at reception
};

// Completes the pending message at slot t: the recorded age is the aging
// function of (t - gen_slot), delta moves to gen_slot and the device goes idle.
// Throws std::domain_error for an idle device or t < gen_slot.
Delivery DeliverSuccess(Device device, Slot t);

// Two devices, one RB, no outages: a linearly aging message of current age
// `linear_aoi` and an exponentially aging one of age `exponential_aoi`. One
// device is served now and the other `beta` slots later. Ties go to the
// exponentially aging device under both rules.
struct PairedPolicyOutcome {
  bool current_serves_linear = false;
  bool future_serves_linear = false;
  double current_policy_avg = 0.0;
  double future_policy_avg = 0.0;

  bool disagree() const { return current_serves_linear != future_serves_linear; }
};

PairedPolicyOutcome ComparePairedPolicies(double linear_aoi,
                                          double exponential_aoi, int beta);

}  // namespace aoisim

#endif  // AOISIM_CORE_MODEL_HPP_
