#include "aoisim/core_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoisim {

const char* ToString(AgingKind kind) {
  return kind == AgingKind::kLinear ? "linear" : "exponential";
}

const char* ToString(TypeId type) {
  return type == TypeId::kType1 ? "type1" : "type2";
}

namespace {

void CheckDominantProbability(double m) {
  if (!(m > 0.5 && m < 1.0)) {
    throw std::invalid_argument("dominant aging probability must lie in (0.5, 1), got " +
                                std::to_string(m));
  }
}

}  // namespace

DeviceType DeviceType::Type1(double m1) {
  CheckDominantProbability(m1);
  return DeviceType{TypeId::kType1, m1};
}

DeviceType DeviceType::Type2(double m2) {
  CheckDominantProbability(m2);
  return DeviceType{TypeId::kType2, 1.0 - m2};
}

double Distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double AoiValue(AgingKind kind, double t, double delta) {
  if (t < delta) {
    throw std::domain_error("AoiValue: evaluation slot precedes generation slot");
  }
  const double elapsed = t - delta;
  return kind == AgingKind::kLinear ? elapsed : std::exp2(elapsed - 1.0);
}

double FutureAoi(const Device& device, const AoiClock& clock) {
  if (!device.active) throw std::domain_error("FutureAoi: device has no pending message");
  return AoiValue(device.aging, static_cast<double>(clock.current_slot + clock.beta),
                  static_cast<double>(device.gen_slot));
}

Device ActivationStep(Device device, double v_a, Slot now, Rng& rng, int max_rbs) {
  if (!(v_a >= 0.0 && v_a <= 1.0)) {
    throw std::invalid_argument("activation probability must lie in [0, 1]");
  }
  if (max_rbs < 1) throw std::invalid_argument("max_rbs must be at least 1");
  if (device.active || !rng.Bernoulli(v_a)) return device;

  device.active = true;
  device.gen_slot = now;
  device.aging = rng.Bernoulli(device.dtype.p_linear) ? AgingKind::kLinear
                                                      : AgingKind::kExponential;
  device.n_rbs = max_rbs == 1 ? 1 : 1 + static_cast<int>(rng.UniformIndex(max_rbs));
  device.rbs_left = device.n_rbs;
  return device;
}

Delivery DeliverSuccess(Device device, Slot t) {
  if (!device.active) throw std::domain_error("DeliverSuccess: device is idle");
  const double aoi = AoiValue(device.aging, static_cast<double>(t),
                              static_cast<double>(device.gen_slot));
  device.delta = device.gen_slot;
  device.active = false;
  device.rbs_left = 0;
  return Delivery{device, aoi};
}

PairedPolicyOutcome ComparePairedPolicies(double linear_aoi, double exponential_aoi,
                                          int beta) {
  if (beta < 1) throw std::invalid_argument("beta must be at least 1");
  const double growth = std::exp2(beta);
  const double linear_future = linear_aoi + beta;
  const double exponential_future = exponential_aoi * growth;

  // Average delivery age when the given device goes first and the other one
  // is delivered beta slots later.
  const double linear_first = 0.5 * (linear_aoi + exponential_future);
  const double exponential_first = 0.5 * (exponential_aoi + linear_future);

  PairedPolicyOutcome out;
  out.current_serves_linear = linear_aoi > exponential_aoi;
  out.future_serves_linear = linear_future > exponential_future;
  out.current_policy_avg = out.current_serves_linear ? linear_first : exponential_first;
  out.future_policy_avg = out.future_serves_linear ? linear_first : exponential_first;
  return out;
}

}  // namespace aoisim
