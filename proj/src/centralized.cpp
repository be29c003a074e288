#include "aoisim/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aoisim {

double RachCollisionProbability(int n_active, int preambles) {
  if (preambles < 1) throw std::invalid_argument("RACH needs at least one preamble");
  if (n_active <= 1) return 0.0;
  const double keep = static_cast<double>(preambles - 1) / preambles;
  return 1.0 - std::pow(keep, n_active - 1);
}

std::vector<UplinkRequest> RachPhase(std::span<const UplinkRequest> requests,
                                     const RachConfig& config, Rng& rng) {
  if (config.preambles < 1) throw std::invalid_argument("RACH needs at least one preamble");
  std::vector<UplinkRequest> survivors;
  const int n = static_cast<int>(requests.size());
  if (config.exact_preambles) {
    std::vector<int> choice(n);
    std::vector<int> load(config.preambles, 0);
    for (int i = 0; i < n; ++i) {
      choice[i] = static_cast<int>(rng.UniformIndex(config.preambles));
      ++load[choice[i]];
    }
    for (int i = 0; i < n; ++i) {
      if (load[choice[i]] == 1) survivors.push_back(requests[i]);
    }
    return survivors;
  }
  const double c = RachCollisionProbability(n, config.preambles);
  for (const UplinkRequest& request : requests) {
    if (!rng.Bernoulli(c)) survivors.push_back(request);
  }
  return survivors;
}

bool IsPowerOfTwo(double value) {
  if (!(value >= 1.0) || !std::isfinite(value)) return false;
  int exponent = 0;
  return std::frexp(value, &exponent) == 0.5;
}

std::optional<AgingKind> IdentifyAging(double current_aoi, Slot now,
                                       const std::optional<RequestObservation>& previous) {
  if (current_aoi >= 1.0 && current_aoi == std::floor(current_aoi) &&
      !IsPowerOfTwo(current_aoi)) {
    return AgingKind::kLinear;
  }
  if (!previous || previous->slot >= now) return std::nullopt;
  const double dt = static_cast<double>(now - previous->slot);
  const bool linear = current_aoi == previous->aoi + dt;
  const bool exponential = current_aoi == previous->aoi * std::exp2(dt);
  if (linear == exponential) return std::nullopt;
  return linear ? AgingKind::kLinear : AgingKind::kExponential;
}

TypeId LearnType(const ObservationCounts& counts, double m1, double m2) {
  const double type1 = counts.linear * std::log(m1) + counts.exponential * std::log1p(-m1);
  const double type2 = counts.linear * std::log1p(-m2) + counts.exponential * std::log(m2);
  return type1 > type2 ? TypeId::kType1 : TypeId::kType2;
}

TypeLearner::TypeLearner(int num_devices, TypePriors priors)
    : priors_(priors), counts_(num_devices) {}

void TypeLearner::Record(int device_id, AgingKind kind) {
  ObservationCounts& c = counts_.at(device_id);
  if (kind == AgingKind::kLinear) {
    ++c.linear;
  } else {
    ++c.exponential;
  }
}

std::optional<TypeId> TypeLearner::Estimate(int device_id) const {
  const ObservationCounts& c = counts_.at(device_id);
  if (c.total() == 0) return std::nullopt;
  return LearnType(c, priors_.m1, priors_.m2);
}

double ExactFutureAoi(double c, AgingKind kind, int beta) {
  return kind == AgingKind::kLinear ? c + beta : c * std::exp2(beta);
}

double ExpectedFutureAoi(double c, TypeId type, double m1, double m2, int beta) {
  const double p_linear = type == TypeId::kType1 ? m1 : 1.0 - m2;
  return p_linear * ExactFutureAoi(c, AgingKind::kLinear, beta) +
         (1.0 - p_linear) * ExactFutureAoi(c, AgingKind::kExponential, beta);
}

double MarginalExpectedFutureAoi(double c, const TypePriors& priors, int beta) {
  const double q = priors.type1_fraction;
  return q * ExpectedFutureAoi(c, TypeId::kType1, priors.m1, priors.m2, beta) +
         (1.0 - q) * ExpectedFutureAoi(c, TypeId::kType2, priors.m1, priors.m2, beta);
}

namespace {

int TieClass(const std::optional<TypeId>& type) {
  if (!type) return 1;
  return *type == TypeId::kType2 ? 0 : 2;
}

}  // namespace

RbAssignment AllocateByPriority(std::vector<PriorityEntry> entries, int num_rbs, Slot slot,
                                Rng* tie_rng) {
  if (num_rbs < 1) throw std::invalid_argument("AllocateByPriority: R must be positive");
  if (tie_rng != nullptr) {
    for (std::size_t i = entries.size(); i > 1; --i) {
      std::swap(entries[i - 1], entries[tie_rng->UniformIndex(i)]);
    }
  } else {
    std::sort(entries.begin(), entries.end(),
              [](const PriorityEntry& a, const PriorityEntry& b) {
                return a.device_id < b.device_id;
              });
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const PriorityEntry& a, const PriorityEntry& b) {
                     if (a.key != b.key) return a.key > b.key;
                     return TieClass(a.type) < TieClass(b.type);
                   });

  RbAssignment assignment;
  assignment.slot = slot;
  int next = 0;
  for (const PriorityEntry& entry : entries) {
    if (next >= num_rbs) break;
    if (entry.rbs_needed < 1) {
      throw std::invalid_argument("request for device " + std::to_string(entry.device_id) +
                                  " needs no RBs");
    }
    const int granted = std::min(num_rbs - next, entry.rbs_needed);
    RbGrant grant{entry.device_id, {}};
    for (int k = 0; k < granted; ++k) grant.rbs.push_back(next + k);
    next += granted;
    assignment.entries.push_back(std::move(grant));
  }
  return assignment;
}

const char* ToString(SchedulerVariant variant) {
  switch (variant) {
    case SchedulerVariant::kNoLearning:
      return "no_learning";
    case SchedulerVariant::kLearning:
      return "learning";
    case SchedulerVariant::kFullInfo:
      return "full_info";
  }
  return "?";
}

CentralizedScheduler::CentralizedScheduler(SchedulerVariant variant, int num_devices,
                                           TypePriors priors, int beta,
                                           std::vector<TypeId> true_types)
    : variant_(variant),
      beta_(beta),
      learner_(num_devices, priors),
      true_types_(std::move(true_types)),
      history_(num_devices) {
  if (beta < 1) throw std::invalid_argument("beta must be at least 1");
  if (variant == SchedulerVariant::kFullInfo &&
      static_cast<int>(true_types_.size()) != num_devices) {
    throw std::invalid_argument("full-information scheduling needs every device type");
  }
}

PriorityEntry CentralizedScheduler::Rank(const UplinkRequest& request, Slot now) {
  PriorityEntry entry;
  entry.device_id = request.device_id;
  entry.rbs_needed = request.rbs_needed;
  const double c = request.current_aoi;

  switch (variant_) {
    case SchedulerVariant::kFullInfo:
      if (!request.disclosed_aging) {
        throw std::logic_error("full-information request without its aging function");
      }
      entry.key = ExactFutureAoi(c, *request.disclosed_aging, beta_);
      entry.type = true_types_.at(request.device_id);
      return entry;

    case SchedulerVariant::kNoLearning:
      entry.key = MarginalExpectedFutureAoi(c, learner_.priors(), beta_);
      return entry;

    case SchedulerVariant::kLearning:
      break;
  }

  MessageHistory& h = history_.at(request.device_id);
  if (!h.identified) {
    h.identified = IdentifyAging(c, now, h.last_request);
    if (h.identified) learner_.Record(request.device_id, *h.identified);
  }
  h.last_request = RequestObservation{now, c};
  entry.type = learner_.Estimate(request.device_id);

  const TypePriors& pr = learner_.priors();
  if (h.identified) {
    entry.key = ExactFutureAoi(c, *h.identified, beta_);
  } else if (entry.type) {
    entry.key = ExpectedFutureAoi(c, *entry.type, pr.m1, pr.m2, beta_);
  } else {
    entry.key = MarginalExpectedFutureAoi(c, pr, beta_);
  }
  return entry;
}

RbAssignment CentralizedScheduler::Schedule(std::span<const UplinkRequest> requests, Slot now,
                                            int num_rbs, Rng* tie_rng) {
  std::vector<PriorityEntry> entries;
  entries.reserve(requests.size());
  for (const UplinkRequest& request : requests) entries.push_back(Rank(request, now));
  return AllocateByPriority(std::move(entries), num_rbs, now, tie_rng);
}

void CentralizedScheduler::OnDelivered(int device_id, std::optional<AgingKind> revealed) {
  MessageHistory& h = history_.at(device_id);
  if (variant_ == SchedulerVariant::kLearning && !h.identified && revealed) {
    learner_.Record(device_id, *revealed);
  }
  h = {};
}

}  // namespace aoisim
