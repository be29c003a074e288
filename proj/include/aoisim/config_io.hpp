#ifndef AOISIM_CONFIG_IO_HPP_
#define AOISIM_CONFIG_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "aoisim/engine.hpp"

namespace aoisim {

// Scenario files are flat `key = value` lines. Blank lines and text after `#`
// are ignored. Keys are the ScenarioConfig field names (see ConfigKeys) or the
// short aliases N, R, P, r_c, w and l.
//
// Throws ConfigError naming the file and line on any problem.
ScenarioConfig LoadConfigFile(const std::string& path, ScenarioConfig base = {});
ScenarioConfig ParseConfigText(const std::string& text, ScenarioConfig base = {},
                               const std::string& origin = "<text>");

// Applies one `key=value` override.
void ApplyAssignment(ScenarioConfig& config, const std::string& assignment);

// Every field as `<prefix>key = value` lines, in ConfigKeys order. With the
// prefix stripped the block parses back to the same config.
std::string ConfigEcho(const ScenarioConfig& config, const std::string& prefix = "# ");

enum class OutputFormat { kCsv, kJsonl };
OutputFormat ParseOutputFormat(const std::string& name);  // throws ConfigError

// Per-slot columns, in output order.
const std::vector<std::string>& SlotColumns();

// Shortest round-trip text for a double; "nan" and "inf" for non-finite values.
std::string FormatNumber(double value);

// CSV starts with the config echo as `#` lines, then the header row. JSONL
// starts with a {"config": {...}} object.
void WriteRecords(std::ostream& out, OutputFormat format, const ScenarioConfig& config,
                  const std::vector<SlotRecord>& records);

// Summary table of a sweep or preset: one row per (series, value, replicate).
struct SummaryRow {
  std::string series;
  std::string parameter;
  std::string value;
  int replicate = 0;
  std::uint64_t seed = 0;
  RunSummary summary;
};

void WriteSummaries(std::ostream& out, OutputFormat format, const ScenarioConfig& base,
                    const std::vector<SummaryRow>& rows);

// Per-slot rows of several runs, each prefixed with its series, value,
// replicate and seed.
struct TrajectoryRow {
  std::string series;
  std::string parameter;
  std::string value;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<SlotRecord> records;
};

void WriteTrajectories(std::ostream& out, OutputFormat format, const ScenarioConfig& base,
                       const std::vector<TrajectoryRow>& rows);

}  // namespace aoisim

#endif  // AOISIM_CONFIG_IO_HPP_
