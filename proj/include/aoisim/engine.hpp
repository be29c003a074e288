#ifndef AOISIM_ENGINE_HPP_
#define AOISIM_ENGINE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoisim/centralized.hpp"
#include "aoisim/channel.hpp"
#include "aoisim/core_model.hpp"
#include "aoisim/distributed.hpp"
#include "aoisim/rng.hpp"

namespace aoisim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode {
  kCentralizedNoLearning,
  kCentralizedLearning,
  kCentralizedFullInfo,
  kDistributedSca,
  kDistributedRandom,
  kDistributedPredetermined,
};

const char* ToString(Mode mode);
Mode ParseMode(const std::string& name);  // throws ConfigError
bool IsCentralized(Mode mode);

struct ScenarioConfig {
  int num_devices = 200;  // N
  int num_rbs = 50;       // R
  int preambles = 64;     // P
  bool exact_preambles = false;
  int slots = 5000;
  double v_a = 0.3;
  double m1 = 0.75;
  double m2 = 0.75;
  double type1_fraction = 0.6;
  double mean_snr_db = 20.0;
  // When both are set, each device draws its mean SNR uniformly in dB.
  std::optional<double> snr_min_db;
  std::optional<double> snr_max_db;
  double epsilon = 1.0;
  int beta = 1;
  double zeta = 1.2;
  double comm_range = 10.0;  // r_c
  double width = 10.0;       // w
  double length = 10.0;      // l
  Mode mode = Mode::kCentralizedLearning;
  std::uint64_t seed = 1;
  // RB demand of a message is uniform in 1..max_rbs_per_message.
  int max_rbs_per_message = 1;
  double warmup_fraction = 0.1;
  double rho = 2.0;
  double gamma = 1.0;
  double eta = 0.5;

  void Validate() const;  // throws ConfigError
  GameParams game_params() const;
  int warmup_slots() const;
};

// Field names accepted by SetConfigValue, in declaration order.
const std::vector<std::string>& ConfigKeys();

// Assigns one field from its text form. Throws ConfigError on an unknown key
// or a malformed value.
void SetConfigValue(ScenarioConfig& config, const std::string& key, const std::string& value);

// Text form of one field, parseable by SetConfigValue.
std::string GetConfigValue(const ScenarioConfig& config, const std::string& key);

struct SlotRecord {
  Slot slot = 0;
  double avg_inst_aoi_slot = 0.0;  // NaN when nothing was delivered
  double avg_inst_aoi_cum = 0.0;   // NaN until the first delivery
  double service_rate = 0.0;
  int n_active = 0;
  int n_transmitting = 0;
  int rach_failures = 0;
  int duplicate_failures = 0;
  int outage_failures = 0;
  int successes = 0;
  int deliveries = 0;
  int unused_rbs = 0;
};

struct RunSummary {
  int slots = 0;
  int warmup_slots = 0;
  long deliveries = 0;
  double mean_inst_aoi = 0.0;             // over every delivery
  double mean_inst_aoi_post_warmup = 0.0;  // deliveries after the warm-up prefix
  double mean_service_rate = 0.0;
  double mean_service_rate_post_warmup = 0.0;
  long rach_failures = 0;
  long duplicate_failures = 0;
  long outage_failures = 0;
};

struct RunResult {
  std::vector<SlotRecord> records;
  RunSummary summary;
};

// One seeded scenario advanced slot by slot.
//
// Slot 0 only draws the first activations. Each later slot t allocates RBs to
// the pending messages, resolves the channel, records deliveries and finally
// lets idle devices generate a message stamped with slot t, which is first
// transmitted in slot t + 1.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Advances one slot and returns its record.
  SlotRecord Step();
  Slot current_slot() const { return slot_; }

  const ScenarioConfig& config() const { return config_; }
  const std::vector<Device>& devices() const { return devices_; }
  const ChannelModel& channel() const { return channel_; }
  bool full_information() const { return full_information_; }

  // Distributed modes: game actions (0 or 1..R) of the last slot, and the
  // future ages and activity the devices decided on.
  const std::vector<Action>& last_actions() const { return last_actions_; }
  const std::vector<double>& decision_future_aoi() const { return decision_future_aoi_; }
  const std::vector<bool>& decision_active() const { return decision_active_; }

  // Centralized modes only; nullptr otherwise.
  const CentralizedScheduler* scheduler() const { return scheduler_.get(); }

 private:
  struct Outcome {
    int device_id;
    int rbs;
    TxOutcome result;
  };

  void Activate(Slot now);
  std::vector<RbGrant> AllocateCentralized(SlotRecord& record);
  std::vector<RbGrant> AllocateDistributed(SlotRecord& record);
  double CurrentAoi(const Device& d) const;
  double FutureAoiAt(const Device& d) const;

  ScenarioConfig config_;
  ChannelModel channel_;
  std::vector<Device> devices_;
  std::vector<std::vector<int>> neighbors_;
  bool full_information_ = false;
  Slot slot_ = 0;

  std::vector<Rng> activation_rng_;
  Rng channel_rng_;
  Rng access_rng_;
  Rng policy_rng_;

  std::unique_ptr<CentralizedScheduler> scheduler_;

  std::vector<Action> last_actions_;
  std::vector<bool> last_success_;
  std::vector<double> decision_future_aoi_;
  std::vector<bool> decision_active_;

  double aoi_sum_ = 0.0;
  long aoi_count_ = 0;
};

// Runs config.slots slots. Output depends only on the config, seed included.
RunResult Run(const ScenarioConfig& config);

RunSummary Summarize(const std::vector<SlotRecord>& records, int warmup_slots);

struct SweepPoint {
  std::size_t value_index = 0;
  std::string value;
  int replicate = 0;
  std::uint64_t seed = 0;
  RunResult result;
};

// Seed of replicate r at value index v. (0, 0) keeps the base seed so that a
// one-point sweep matches a plain run.
std::uint64_t SweepSeed(std::uint64_t base_seed, std::size_t value_index, int replicate);

// Runs every (value, replicate) pair, up to `jobs` at a time. Results are
// ordered by value, then replicate. Throws ConfigError for an unknown
// parameter or an invalid resulting config, before anything runs.
std::vector<SweepPoint> Sweep(const ScenarioConfig& base, const std::string& parameter,
                              const std::vector<std::string>& values, int replicates,
                              int jobs = 1, bool keep_records = true);

struct Aggregate {
  std::string value;
  int replicates = 0;
  double mean_inst_aoi = 0.0;
  double mean_inst_aoi_se = 0.0;
  double service_rate = 0.0;
  double service_rate_se = 0.0;
};

// Mean and standard error over replicates of the post-warm-up summaries.
std::vector<Aggregate> AggregateSweep(const std::vector<SweepPoint>& points);

}  // namespace aoisim

#endif  // AOISIM_ENGINE_HPP_
