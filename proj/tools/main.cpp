// aoisim command-line front end.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoisim/config_io.hpp"
#include "aoisim/engine.hpp"
#include "aoisim/presets.hpp"
#include "aoisim/verify.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr const char* kOutputDirEnv = "AOISIM_OUTPUT_DIR";

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> slots;
  std::string out;
  std::string format = "csv";
  bool quiet = false;
  std::vector<std::string> sets;
  int jobs = 1;
};

void AddCommon(CLI::App* cmd, Common& c, bool with_config) {
  if (with_config) {
    cmd->add_option("--config", c.config_path, "key = value scenario file");
  }
  cmd->add_option("--seed", c.seed, "base seed");
  cmd->add_option("--slots", c.slots, "slots per run");
  cmd->add_option("--out", c.out, "output file (default: stdout or $AOISIM_OUTPUT_DIR)");
  cmd->add_option("--format", c.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--set", c.sets, "override a config field, key=value (repeatable)");
  cmd->add_flag("--quiet", c.quiet, "no progress or summary on stderr");
}

aoisim::ScenarioConfig BuildConfig(const Common& c) {
  aoisim::ScenarioConfig config;
  if (!c.config_path.empty()) config = aoisim::LoadConfigFile(c.config_path);
  for (const std::string& a : c.sets) aoisim::ApplyAssignment(config, a);
  if (c.seed) config.seed = *c.seed;
  if (c.slots) config.slots = *c.slots;
  config.Validate();
  return config;
}

// Opens the destination for a table: --out, else $AOISIM_OUTPUT_DIR/<stem>.<ext>,
// else stdout.
class Output {
 public:
  Output(const Common& c, const std::string& stem) {
    std::string path = c.out;
    if (path.empty()) {
      if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
        std::filesystem::create_directories(dir);
        path = (std::filesystem::path(dir) / (stem + "." + c.format)).string();
      }
    }
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw aoisim::ConfigError("cannot write '" + path + "'");
    path_ = path;
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  const std::string& path() const { return path_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

void Note(const Common& c, const std::string& text) {
  if (!c.quiet) std::cerr << text << "\n";
}

std::string Describe(const aoisim::RunSummary& s) {
  std::ostringstream o;
  o << "deliveries " << s.deliveries << ", mean AoI " << aoisim::FormatNumber(s.mean_inst_aoi)
    << " (after warm-up " << aoisim::FormatNumber(s.mean_inst_aoi_post_warmup)
    << "), service rate " << aoisim::FormatNumber(s.mean_service_rate) << " (after warm-up "
    << aoisim::FormatNumber(s.mean_service_rate_post_warmup) << ")";
  return o.str();
}

std::vector<std::string> SplitValues(const std::vector<std::string>& raw) {
  std::vector<std::string> values;
  for (const std::string& item : raw) {
    std::stringstream in(item);
    std::string v;
    while (std::getline(in, v, ',')) {
      if (!v.empty()) values.push_back(v);
    }
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information RB allocation simulator"};
  app.require_subcommand(1);

  Common common;

  CLI::App* run = app.add_subcommand("run", "simulate one scenario and write per-slot records");
  AddCommon(run, common, true);

  std::string param;
  std::vector<std::string> raw_values;
  int replicates = 1;
  bool trajectories = false;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one config field over a list of values");
  AddCommon(sweep, common, true);
  sweep->add_option("--param", param, "config field to vary")->required();
  sweep->add_option("--values", raw_values, "values, comma separated or repeated")->required();
  sweep->add_option("--replicates", replicates, "replicates per value")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", common.jobs, "parallel runs")->check(CLI::PositiveNumber);
  sweep->add_flag("--trajectories", trajectories, "write per-slot rows instead of summaries");

  std::string preset_name;
  std::optional<int> preset_replicates;
  bool list_presets = false;
  CLI::App* preset = app.add_subcommand("preset", "run a named figure or table preset");
  AddCommon(preset, common, false);
  preset->add_option("name", preset_name, "preset name");
  preset->add_option("--replicates", preset_replicates, "override replicates (runs)")
      ->check(CLI::PositiveNumber);
  preset->add_option("--jobs", common.jobs, "parallel runs")->check(CLI::PositiveNumber);
  preset->add_flag("--list", list_presets, "list presets and exit");

  std::uint64_t verify_seed = 1;
  bool verify_quiet = false;
  CLI::App* verify = app.add_subcommand("verify", "check the game, rate and ordering properties");
  verify->add_option("--seed", verify_seed, "seed for the Monte Carlo checks");
  verify->add_flag("--quiet", verify_quiet, "print failures only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      const aoisim::ScenarioConfig config = BuildConfig(common);
      Output out(common, "run");
      const aoisim::RunResult result = aoisim::Run(config);
      aoisim::WriteRecords(out.stream(), aoisim::ParseOutputFormat(common.format), config,
                           result.records);
      Note(common, Describe(result.summary));
      return 0;
    }

    if (*sweep) {
      const aoisim::ScenarioConfig config = BuildConfig(common);
      const std::vector<std::string> values = SplitValues(raw_values);
      if (values.empty()) throw aoisim::ConfigError("--values is empty");
      const auto points =
          aoisim::Sweep(config, param, values, replicates, common.jobs, trajectories);
      Output out(common, "sweep");
      const auto format = aoisim::ParseOutputFormat(common.format);
      const std::string series = aoisim::ToString(config.mode);
      if (trajectories) {
        std::vector<aoisim::TrajectoryRow> rows;
        for (const auto& p : points) {
          rows.push_back({series, param, p.value, p.replicate, p.seed, p.result.records});
        }
        aoisim::WriteTrajectories(out.stream(), format, config, rows);
      } else {
        std::vector<aoisim::SummaryRow> rows;
        for (const auto& p : points) {
          rows.push_back({series, param, p.value, p.replicate, p.seed, p.result.summary});
        }
        aoisim::WriteSummaries(out.stream(), format, config, rows);
      }
      if (!common.quiet) {
        for (const aoisim::Aggregate& a : aoisim::AggregateSweep(points)) {
          std::cerr << param << "=" << a.value << ": mean AoI "
                    << aoisim::FormatNumber(a.mean_inst_aoi) << " +- "
                    << aoisim::FormatNumber(a.mean_inst_aoi_se) << ", service rate "
                    << aoisim::FormatNumber(a.service_rate) << " +- "
                    << aoisim::FormatNumber(a.service_rate_se) << "\n";
        }
      }
      return 0;
    }

    if (*preset) {
      if (list_presets) {
        for (const aoisim::Preset& p : aoisim::Presets()) {
          std::cout << p.name << "\t" << p.description << "\n";
        }
        return 0;
      }
      const aoisim::Preset* found = aoisim::FindPreset(preset_name);
      if (found == nullptr) {
        std::cerr << "unknown preset '" << preset_name << "'; available:";
        for (const aoisim::Preset& p : aoisim::Presets()) std::cerr << ' ' << p.name;
        std::cerr << "\n";
        return kExitConfig;
      }
      aoisim::PresetOptions options;
      options.seed = common.seed;
      options.slots = common.slots;
      options.replicates = preset_replicates;
      options.assignments = common.sets;
      options.jobs = common.jobs;
      const auto format = aoisim::ParseOutputFormat(common.format);
      // Expand and validate before touching the output file.
      aoisim::PresetBase(*found, options).Validate();
      Output out(common, "preset-" + found->name);
      aoisim::RunPreset(*found, options, out.stream(), format);
      if (!out.path().empty()) Note(common, "wrote " + out.path());
      return 0;
    }

    if (*verify) {
      bool all = true;
      for (const aoisim::CheckResult& r : aoisim::VerifyAll(verify_seed)) {
        all = all && r.passed;
        if (!verify_quiet || !r.passed) {
          std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        }
      }
      return all ? 0 : kExitVerify;
    }
  } catch (const aoisim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
