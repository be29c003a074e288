#include "aoisim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "aoisim/rb_planner.hpp"

namespace aoisim {

namespace {

constexpr struct {
  Mode mode;
  const char* name;
} kModeNames[] = {
    {Mode::kCentralizedNoLearning, "centralized_no_learning"},
    {Mode::kCentralizedLearning, "centralized_learning"},
    {Mode::kCentralizedFullInfo, "centralized_full_info"},
    {Mode::kDistributedSca, "distributed_sca"},
    {Mode::kDistributedRandom, "distributed_random"},
    {Mode::kDistributedPredetermined, "distributed_predetermined"},
};

const double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

const char* ToString(Mode mode) {
  for (const auto& m : kModeNames) {
    if (m.mode == mode) return m.name;
  }
  return "?";
}

Mode ParseMode(const std::string& name) {
  for (const auto& m : kModeNames) {
    if (name == m.name) return m.mode;
  }
  throw ConfigError("unknown mode '" + name + "'");
}

bool IsCentralized(Mode mode) {
  return mode == Mode::kCentralizedNoLearning || mode == Mode::kCentralizedLearning ||
         mode == Mode::kCentralizedFullInfo;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

long long ParseInt(const std::string& key, const std::string& text) {
  long long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  Require(res.ec == std::errc() && res.ptr == text.data() + text.size(),
          "'" + key + "' expects an integer, got '" + text + "'");
  return v;
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  Require(res.ec == std::errc() && res.ptr == text.data() + text.size(),
          "'" + key + "' expects a non-negative integer, got '" + text + "'");
  return v;
}

double ParseDouble(const std::string& key, const std::string& text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  Require(res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(v),
          "'" + key + "' expects a number, got '" + text + "'");
  return v;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + text + "'");
}

int ParseIntField(const std::string& key, const std::string& text) {
  const long long v = ParseInt(key, text);
  Require(v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max(),
          "'" + key + "' is out of range");
  return static_cast<int>(v);
}

struct Field {
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
Field IntField(T ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*member = ParseIntField(k, v);
          },
          [member](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

Field DoubleField(double ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*member = ParseDouble(k, v);
          },
          [member](const ScenarioConfig& c) { return FormatDouble(c.*member); }};
}

Field OptionalDoubleField(std::optional<double> ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, const std::string& k, const std::string& v) {
            if (v.empty() || v == "none") {
              c.*member = std::nullopt;
            } else {
              c.*member = ParseDouble(k, v);
            }
          },
          [member](const ScenarioConfig& c) {
            return (c.*member) ? FormatDouble(*(c.*member)) : std::string("none");
          }};
}

const std::vector<std::pair<std::string, Field>>& FieldTable() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"num_devices", IntField(&ScenarioConfig::num_devices)},
      {"num_rbs", IntField(&ScenarioConfig::num_rbs)},
      {"preambles", IntField(&ScenarioConfig::preambles)},
      {"exact_preambles",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.exact_preambles = ParseBool(k, v);
        },
        [](const ScenarioConfig& c) {
          return std::string(c.exact_preambles ? "true" : "false");
        }}},
      {"slots", IntField(&ScenarioConfig::slots)},
      {"v_a", DoubleField(&ScenarioConfig::v_a)},
      {"m1", DoubleField(&ScenarioConfig::m1)},
      {"m2", DoubleField(&ScenarioConfig::m2)},
      {"type1_fraction", DoubleField(&ScenarioConfig::type1_fraction)},
      {"mean_snr_db", DoubleField(&ScenarioConfig::mean_snr_db)},
      {"snr_min_db", OptionalDoubleField(&ScenarioConfig::snr_min_db)},
      {"snr_max_db", OptionalDoubleField(&ScenarioConfig::snr_max_db)},
      {"epsilon", DoubleField(&ScenarioConfig::epsilon)},
      {"beta", IntField(&ScenarioConfig::beta)},
      {"zeta", DoubleField(&ScenarioConfig::zeta)},
      {"comm_range", DoubleField(&ScenarioConfig::comm_range)},
      {"width", DoubleField(&ScenarioConfig::width)},
      {"length", DoubleField(&ScenarioConfig::length)},
      {"mode",
       {[](ScenarioConfig& c, const std::string&, const std::string& v) {
          c.mode = ParseMode(v);
        },
        [](const ScenarioConfig& c) { return std::string(ToString(c.mode)); }}},
      {"seed",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.seed = ParseUnsigned(k, v);
        },
        [](const ScenarioConfig& c) { return std::to_string(c.seed); }}},
      {"max_rbs_per_message", IntField(&ScenarioConfig::max_rbs_per_message)},
      {"warmup_fraction", DoubleField(&ScenarioConfig::warmup_fraction)},
      {"rho", DoubleField(&ScenarioConfig::rho)},
      {"gamma", DoubleField(&ScenarioConfig::gamma)},
      {"eta", DoubleField(&ScenarioConfig::eta)},
  };
  return table;
}

const std::unordered_map<std::string, std::string>& Aliases() {
  static const std::unordered_map<std::string, std::string> aliases = {
      {"N", "num_devices"}, {"R", "num_rbs"}, {"P", "preambles"},
      {"r_c", "comm_range"}, {"w", "width"}, {"l", "length"},
  };
  return aliases;
}

const Field& FindField(const std::string& key) {
  std::string canonical = key;
  if (auto it = Aliases().find(key); it != Aliases().end()) canonical = it->second;
  for (const auto& [name, field] : FieldTable()) {
    if (name == canonical) return field;
  }
  throw ConfigError("unknown parameter '" + key + "'");
}

}  // namespace

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, field] : FieldTable()) k.push_back(name);
    return k;
  }();
  return keys;
}

void SetConfigValue(ScenarioConfig& config, const std::string& key, const std::string& value) {
  FindField(key).set(config, key, value);
}

std::string GetConfigValue(const ScenarioConfig& config, const std::string& key) {
  return FindField(key).get(config);
}

void ScenarioConfig::Validate() const {
  Require(num_devices >= 1, "num_devices must be at least 1");
  Require(num_rbs >= 1, "num_rbs must be at least 1");
  Require(preambles >= 1, "preambles must be at least 1");
  Require(slots >= 1, "slots must be at least 1");
  Require(v_a >= 0.0 && v_a <= 1.0, "v_a must lie in [0, 1]");
  Require(m1 > 0.5 && m1 < 1.0, "m1 must lie in (0.5, 1)");
  Require(m2 > 0.5 && m2 < 1.0, "m2 must lie in (0.5, 1)");
  Require(type1_fraction >= 0.0 && type1_fraction <= 1.0, "type1_fraction must lie in [0, 1]");
  Require(snr_min_db.has_value() == snr_max_db.has_value(),
          "snr_min_db and snr_max_db must be set together");
  if (snr_min_db) Require(*snr_min_db <= *snr_max_db, "snr_min_db exceeds snr_max_db");
  Require(epsilon >= 0.0, "epsilon must be non-negative");
  Require(beta >= 1, "beta must be at least 1");
  Require(zeta > 0.0, "zeta must be positive");
  Require(comm_range >= 0.0, "comm_range must be non-negative");
  Require(width > 0.0 && length > 0.0, "width and length must be positive");
  Require(max_rbs_per_message >= 1 && max_rbs_per_message <= num_rbs,
          "max_rbs_per_message must lie in [1, num_rbs]");
  Require(max_rbs_per_message <= 31, "max_rbs_per_message must not exceed 31");
  Require(IsCentralized(mode) || max_rbs_per_message == 1,
          "distributed modes transmit single-RB messages only");
  Require(warmup_fraction >= 0.0 && warmup_fraction < 1.0, "warmup_fraction must lie in [0, 1)");
  try {
    game_params().Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

GameParams ScenarioConfig::game_params() const {
  return GameParams{rho, gamma, eta, zeta, comm_range};
}

int ScenarioConfig::warmup_slots() const {
  return static_cast<int>(std::floor(warmup_fraction * slots));
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

enum Stream : std::uint64_t {
  kPlacement = 1,
  kTypes = 2,
  kSnr = 3,
  kChannel = 4,
  kAccess = 5,
  kPolicy = 6,
  kActivationBase = 1000,
};

SchedulerVariant VariantFor(Mode mode) {
  switch (mode) {
    case Mode::kCentralizedNoLearning:
      return SchedulerVariant::kNoLearning;
    case Mode::kCentralizedFullInfo:
      return SchedulerVariant::kFullInfo;
    default:
      return SchedulerVariant::kLearning;
  }
}

}  // namespace

Simulation::Simulation(ScenarioConfig config)
    : config_(std::move(config)),
      channel_rng_(StreamSeed(config_.seed, kChannel)),
      access_rng_(StreamSeed(config_.seed, kAccess)),
      policy_rng_(StreamSeed(config_.seed, kPolicy)) {
  config_.Validate();
  const int n = config_.num_devices;

  Rng placement(StreamSeed(config_.seed, kPlacement));
  Rng types(StreamSeed(config_.seed, kTypes));
  devices_.resize(n);
  for (int i = 0; i < n; ++i) {
    Device& d = devices_[i];
    d.id = i;
    d.position.x = placement.Uniform() * config_.width;
    d.position.y = placement.Uniform() * config_.length;
    d.dtype = types.Bernoulli(config_.type1_fraction) ? DeviceType::Type1(config_.m1)
                                                      : DeviceType::Type2(config_.m2);
  }

  channel_ = ChannelModel::FromMeanSnrDb(config_.mean_snr_db, config_.epsilon);
  if (config_.snr_min_db) {
    Rng snr(StreamSeed(config_.seed, kSnr));
    const double lo = *config_.snr_min_db;
    const double hi = *config_.snr_max_db;
    for (int i = 0; i < n; ++i) {
      channel_.per_device_mean_snr.push_back(DbToLinear(lo + snr.Uniform() * (hi - lo)));
    }
  }
  channel_.Validate();

  double max_distance = 0.0;
  neighbors_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dist = Distance(devices_[i].position, devices_[j].position);
      max_distance = std::max(max_distance, dist);
      if (!IsCentralized(config_.mode) && dist <= config_.comm_range) {
        neighbors_[i].push_back(j);
        neighbors_[j].push_back(i);
      }
    }
  }
  full_information_ = config_.comm_range >= max_distance;
  if (config_.mode == Mode::kDistributedPredetermined && !full_information_) {
    throw ConfigError("pre-determined selection needs comm_range to cover every device pair");
  }

  activation_rng_.reserve(n);
  for (int i = 0; i < n; ++i) {
    activation_rng_.emplace_back(StreamSeed(config_.seed, kActivationBase + i));
  }

  if (IsCentralized(config_.mode)) {
    std::vector<TypeId> truth;
    for (const Device& d : devices_) truth.push_back(d.dtype.id);
    scheduler_ = std::make_unique<CentralizedScheduler>(
        VariantFor(config_.mode), n,
        TypePriors{config_.m1, config_.m2, config_.type1_fraction}, config_.beta,
        std::move(truth));
  }

  last_actions_.assign(n, kSilent);
  last_success_.assign(n, false);
  decision_future_aoi_.assign(n, 0.0);
  decision_active_.assign(n, false);

  Activate(0);
}

Simulation::~Simulation() = default;

void Simulation::Activate(Slot now) {
  for (Device& d : devices_) {
    d = ActivationStep(std::move(d), config_.v_a, now, activation_rng_[d.id],
                       config_.max_rbs_per_message);
  }
}

double Simulation::CurrentAoi(const Device& d) const {
  return AoiValue(d.aging, static_cast<double>(slot_), static_cast<double>(d.gen_slot));
}

double Simulation::FutureAoiAt(const Device& d) const {
  return AoiValue(d.aging, static_cast<double>(slot_ + config_.beta),
                  static_cast<double>(d.gen_slot));
}

std::vector<RbGrant> Simulation::AllocateCentralized(SlotRecord& record) {
  std::vector<UplinkRequest> requests;
  for (const Device& d : devices_) {
    if (!d.active) continue;
    UplinkRequest req;
    req.device_id = d.id;
    req.current_aoi = CurrentAoi(d);
    req.rbs_needed = d.rbs_left > 1 ? PlanMessage(d.rbs_left, d.aging, channel_, d.id,
                                                  config_.num_rbs, slot_, d.gen_slot)
                                          .splits.front()
                                    : 1;
    if (config_.mode == Mode::kCentralizedFullInfo) req.disclosed_aging = d.aging;
    requests.push_back(req);
  }
  const std::vector<UplinkRequest> survivors =
      RachPhase(requests, RachConfig{config_.preambles, config_.exact_preambles}, access_rng_);
  record.rach_failures = static_cast<int>(requests.size() - survivors.size());
  return scheduler_->Schedule(survivors, slot_, config_.num_rbs, &policy_rng_).entries;
}

std::vector<RbGrant> Simulation::AllocateDistributed(SlotRecord&) {
  const int n = config_.num_devices;
  const int r = config_.num_rbs;
  for (int i = 0; i < n; ++i) {
    decision_active_[i] = devices_[i].active;
    decision_future_aoi_[i] = devices_[i].active ? FutureAoiAt(devices_[i]) : 0.0;
  }

  std::vector<int> last_load(r + 1, 0);
  for (Action a : last_actions_) ++last_load[a];
  std::vector<int> unused;
  for (int rb = 1; rb <= r; ++rb) {
    if (last_load[rb] == 0) unused.push_back(rb);
  }

  std::vector<Action> actions(n, kSilent);
  std::vector<double> known;
  auto wants_to_transmit = [&](int i) {
    known.clear();
    known.push_back(decision_future_aoi_[i]);
    for (int j : neighbors_[i]) {
      if (decision_active_[j]) known.push_back(decision_future_aoi_[j]);
    }
    const int kappa = Kappa(static_cast<int>(known.size()), r, n, config_.v_a, config_.zeta,
                            full_information_);
    return TransmitDecision(decision_future_aoi_[i], known, kappa);
  };

  switch (config_.mode) {
    case Mode::kDistributedRandom:
      for (int i = 0; i < n; ++i) {
        if (decision_active_[i] && wants_to_transmit(i)) {
          actions[i] = RandomSelection(r, policy_rng_);
        }
      }
      break;

    case Mode::kDistributedPredetermined: {
      std::vector<int> order;
      for (int i = 0; i < n; ++i) {
        if (decision_active_[i]) order.push_back(i);
      }
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return decision_future_aoi_[a] > decision_future_aoi_[b];
      });
      for (std::size_t k = 0; k < order.size(); ++k) {
        actions[order[k]] =
            PredeterminedSelection(static_cast<int>(k) + 1, r, full_information_);
      }
      break;
    }

    case Mode::kDistributedSca: {
      std::vector<Action> delegated(n, kSilent);
      std::vector<Peer> candidates;
      for (int i = 0; i < n; ++i) {
        const bool active = decision_active_[i];
        const Action last = last_actions_[i];
        ScaInput in;
        in.last_action = last;
        in.last_success = last_success_[i];
        in.active = active;
        in.num_rbs = r;
        in.unused_rbs = unused;
        if (active && !(last != kSilent && last_success_[i])) {
          in.wants_to_transmit = wants_to_transmit(i);
        }
        if (last != kSilent) {
          int claimants = 1;
          for (int j : neighbors_[i]) claimants += last_actions_[j] == last ? 1 : 0;
          in.known_claimants = claimants;
        }
        candidates.clear();
        if (!active && last != kSilent && last_success_[i]) {
          for (int j : neighbors_[i]) {
            const bool repeating = last_actions_[j] != kSilent && last_success_[j];
            if (decision_active_[j] && !repeating) {
              candidates.push_back(Peer{j, decision_future_aoi_[j]});
            }
          }
          in.delegate_candidates = candidates;
        }
        const ScaDecision decision = ScaStep(in, policy_rng_);
        actions[i] = decision.action;
        if (decision.delegate_to) {
          Action& held = delegated[*decision.delegate_to];
          if (held == kSilent || last < held) held = last;
        }
      }
      for (int j = 0; j < n; ++j) {
        if (delegated[j] != kSilent) actions[j] = delegated[j];
      }
      break;
    }

    default:
      throw std::logic_error("AllocateDistributed called in a centralized mode");
  }

  last_actions_ = actions;
  std::vector<RbGrant> grants;
  for (int i = 0; i < n; ++i) {
    if (actions[i] != kSilent) grants.push_back(RbGrant{i, {actions[i] - 1}});
  }
  return grants;
}

SlotRecord Simulation::Step() {
  ++slot_;
  SlotRecord record;
  record.slot = slot_;
  record.n_active = static_cast<int>(
      std::count_if(devices_.begin(), devices_.end(), [](const Device& d) { return d.active; }));

  RbAssignment assignment;
  assignment.slot = slot_;
  assignment.entries =
      IsCentralized(config_.mode) ? AllocateCentralized(record) : AllocateDistributed(record);
  const std::vector<TxOutcome> outcomes =
      ResolveSlot(assignment, channel_, config_.num_rbs, channel_rng_);

  std::vector<int> load(config_.num_rbs, 0);
  for (const RbGrant& g : assignment.entries) {
    for (int rb : g.rbs) ++load[rb];
  }
  record.service_rate =
      static_cast<double>(std::count(load.begin(), load.end(), 1)) / config_.num_rbs;
  record.unused_rbs = static_cast<int>(std::count(load.begin(), load.end(), 0));
  record.n_transmitting = static_cast<int>(assignment.entries.size());

  std::fill(last_success_.begin(), last_success_.end(), false);
  double slot_sum = 0.0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const RbGrant& g = assignment.entries[k];
    Device& d = devices_[g.device_id];
    switch (outcomes[k]) {
      case TxOutcome::kDuplicateFailure:
        ++record.duplicate_failures;
        continue;
      case TxOutcome::kOutageFailure:
        ++record.outage_failures;
        continue;
      case TxOutcome::kSuccess:
        break;
    }
    ++record.successes;
    last_success_[g.device_id] = true;
    d.rbs_left -= static_cast<int>(g.rbs.size());
    if (d.rbs_left > 0) continue;
    Delivery delivery = DeliverSuccess(std::move(d), slot_);
    d = std::move(delivery.device);
    if (scheduler_) scheduler_->OnDelivered(g.device_id, d.aging);
    slot_sum += delivery.aoi;
    ++record.deliveries;
  }
  aoi_sum_ += slot_sum;
  aoi_count_ += record.deliveries;
  record.avg_inst_aoi_slot = record.deliveries > 0 ? slot_sum / record.deliveries : kNaN;
  record.avg_inst_aoi_cum = aoi_count_ > 0 ? aoi_sum_ / aoi_count_ : kNaN;

  Activate(slot_);
  return record;
}

RunSummary Summarize(const std::vector<SlotRecord>& records, int warmup_slots) {
  RunSummary s;
  s.slots = static_cast<int>(records.size());
  s.warmup_slots = warmup_slots;
  double aoi_all = 0.0, aoi_post = 0.0, sr_all = 0.0, sr_post = 0.0;
  long n_post = 0, slots_post = 0;
  for (const SlotRecord& rec : records) {
    const double sum = rec.deliveries > 0 ? rec.avg_inst_aoi_slot * rec.deliveries : 0.0;
    aoi_all += sum;
    s.deliveries += rec.deliveries;
    sr_all += rec.service_rate;
    s.rach_failures += rec.rach_failures;
    s.duplicate_failures += rec.duplicate_failures;
    s.outage_failures += rec.outage_failures;
    if (rec.slot > warmup_slots) {
      aoi_post += sum;
      n_post += rec.deliveries;
      sr_post += rec.service_rate;
      ++slots_post;
    }
  }
  s.mean_inst_aoi = s.deliveries > 0 ? aoi_all / s.deliveries : kNaN;
  s.mean_inst_aoi_post_warmup = n_post > 0 ? aoi_post / n_post : kNaN;
  s.mean_service_rate = records.empty() ? kNaN : sr_all / records.size();
  s.mean_service_rate_post_warmup = slots_post > 0 ? sr_post / slots_post : kNaN;
  return s;
}

RunResult Run(const ScenarioConfig& config) {
  Simulation sim(config);
  RunResult result;
  result.records.reserve(config.slots);
  for (int t = 0; t < config.slots; ++t) result.records.push_back(sim.Step());
  result.summary = Summarize(result.records, config.warmup_slots());
  return result;
}

// ---------------------------------------------------------------------------
// Sweeps

std::uint64_t SweepSeed(std::uint64_t base_seed, std::size_t value_index, int replicate) {
  if (value_index == 0 && replicate == 0) return base_seed;
  const std::uint64_t stream = (static_cast<std::uint64_t>(value_index) << 32) |
                               static_cast<std::uint32_t>(replicate);
  return StreamSeed(base_seed, 0x7377656570000000ULL ^ stream);
}

std::vector<SweepPoint> Sweep(const ScenarioConfig& base, const std::string& parameter,
                              const std::vector<std::string>& values, int replicates, int jobs,
                              bool keep_records) {
  Require(!values.empty(), "sweep needs at least one value");
  Require(replicates >= 1, "sweep needs at least one replicate");
  Require(jobs >= 1, "jobs must be at least 1");
  Require(parameter != "seed", "seed cannot be swept; use replicates");

  std::vector<SweepPoint> points;
  std::vector<ScenarioConfig> configs;
  for (std::size_t v = 0; v < values.size(); ++v) {
    ScenarioConfig cfg = base;
    SetConfigValue(cfg, parameter, values[v]);
    cfg.Validate();
    for (int r = 0; r < replicates; ++r) {
      SweepPoint p;
      p.value_index = v;
      p.value = values[v];
      p.replicate = r;
      p.seed = SweepSeed(base.seed, v, r);
      cfg.seed = p.seed;
      configs.push_back(cfg);
      points.push_back(std::move(p));
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      try {
        points[k].result = Run(configs[k]);
        if (!keep_records) points[k].result.records.clear();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(jobs, static_cast<int>(points.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return points;
}

std::vector<Aggregate> AggregateSweep(const std::vector<SweepPoint>& points) {
  std::vector<Aggregate> out;
  auto stats = [](const std::vector<double>& xs, double& mean, double& se) {
    mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    se = xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1) / xs.size()) : 0.0;
  };
  std::size_t k = 0;
  while (k < points.size()) {
    const std::size_t v = points[k].value_index;
    std::vector<double> aoi, sr;
    Aggregate agg;
    agg.value = points[k].value;
    for (; k < points.size() && points[k].value_index == v; ++k) {
      aoi.push_back(points[k].result.summary.mean_inst_aoi_post_warmup);
      sr.push_back(points[k].result.summary.mean_service_rate_post_warmup);
    }
    agg.replicates = static_cast<int>(aoi.size());
    stats(aoi, agg.mean_inst_aoi, agg.mean_inst_aoi_se);
    stats(sr, agg.service_rate, agg.service_rate_se);
    out.push_back(agg);
  }
  return out;
}

}  // namespace aoisim
