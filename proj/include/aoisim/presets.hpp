#ifndef AOISIM_PRESETS_HPP_
#define AOISIM_PRESETS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aoisim/config_io.hpp"
#include "aoisim/engine.hpp"

namespace aoisim {

using Overrides = std::vector<std::pair<std::string, std::string>>;

// One curve of a figure: the shared sweep run with extra overrides.
struct PresetSeries {
  std::string label;
  Overrides overrides;
};

enum class PresetKind {
  kSweep,        // summary rows per (series, value, replicate)
  kTrajectory,   // per-slot rows per (series, value, replicate)
  kPayoffTable,  // the two-player game table
  kServiceRate,  // random selection, Monte Carlo vs closed form
  kConvergence,  // crowd avoidance with N = R, unused RBs per slot
};

struct Preset {
  std::string name;
  std::string description;
  PresetKind kind = PresetKind::kSweep;
  Overrides base;
  std::string parameter;
  std::vector<std::string> values;
  std::vector<PresetSeries> series;
  int replicates = 1;
};

const std::vector<Preset>& Presets();
const Preset* FindPreset(const std::string& name);

// Command-line adjustments layered on top of a preset.
struct PresetOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> slots;
  std::optional<int> replicates;
  std::vector<std::string> assignments;  // key=value, applied after the preset base
  int jobs = 1;
};

// Base config of a preset with the options applied. Throws ConfigError.
ScenarioConfig PresetBase(const Preset& preset, const PresetOptions& options);

// Runs the preset and writes its table. Output depends only on the preset and
// the options, never on `jobs`.
void RunPreset(const Preset& preset, const PresetOptions& options, std::ostream& out,
               OutputFormat format);

}  // namespace aoisim

#endif  // AOISIM_PRESETS_HPP_
