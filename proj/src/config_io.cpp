#include "aoisim/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace aoisim {

namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

nlohmann::ordered_json JsonNumber(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json ConfigJson(const ScenarioConfig& config) {
  nlohmann::ordered_json j;
  for (const std::string& key : ConfigKeys()) j[key] = GetConfigValue(config, key);
  return j;
}

void AddRecordFields(nlohmann::ordered_json& j, const SlotRecord& r) {
  j["slot"] = r.slot;
  j["avg_inst_aoi_slot"] = JsonNumber(r.avg_inst_aoi_slot);
  j["avg_inst_aoi_cum"] = JsonNumber(r.avg_inst_aoi_cum);
  j["service_rate"] = r.service_rate;
  j["n_active"] = r.n_active;
  j["n_transmitting"] = r.n_transmitting;
  j["rach_failures"] = r.rach_failures;
  j["duplicate_failures"] = r.duplicate_failures;
  j["outage_failures"] = r.outage_failures;
}

void WriteCsvRecord(std::ostream& out, const SlotRecord& r) {
  out << r.slot << ',' << FormatNumber(r.avg_inst_aoi_slot) << ','
      << FormatNumber(r.avg_inst_aoi_cum) << ',' << FormatNumber(r.service_rate) << ','
      << r.n_active << ',' << r.n_transmitting << ',' << r.rach_failures << ','
      << r.duplicate_failures << ',' << r.outage_failures << "\n";
}

}  // namespace

ScenarioConfig ParseConfigText(const std::string& text, ScenarioConfig base,
                               const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'");
      const std::string key = Trim(line.substr(0, eq));
      if (key.empty()) throw ConfigError("missing key");
      SetConfigValue(base, key, Trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

ScenarioConfig LoadConfigFile(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigText(text.str(), std::move(base), path);
}

void ApplyAssignment(ScenarioConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  SetConfigValue(config, Trim(assignment.substr(0, eq)), Trim(assignment.substr(eq + 1)));
}

std::string ConfigEcho(const ScenarioConfig& config, const std::string& prefix) {
  std::string out;
  for (const std::string& key : ConfigKeys()) {
    out += prefix + key + " = " + GetConfigValue(config, key) + "\n";
  }
  return out;
}

OutputFormat ParseOutputFormat(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "jsonl") return OutputFormat::kJsonl;
  throw ConfigError("unknown output format '" + name + "' (expected csv or jsonl)");
}

const std::vector<std::string>& SlotColumns() {
  static const std::vector<std::string> columns = {
      "slot",          "avg_inst_aoi_slot", "avg_inst_aoi_cum",
      "service_rate",  "n_active",          "n_transmitting",
      "rach_failures", "duplicate_failures", "outage_failures",
  };
  return columns;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void WriteRecords(std::ostream& out, OutputFormat format, const ScenarioConfig& config,
                  const std::vector<SlotRecord>& records) {
  if (format == OutputFormat::kJsonl) {
    out << nlohmann::ordered_json{{"config", ConfigJson(config)}}.dump() << "\n";
    for (const SlotRecord& r : records) {
      nlohmann::ordered_json j;
      AddRecordFields(j, r);
      out << j.dump() << "\n";
    }
    return;
  }
  out << ConfigEcho(config);
  const auto& cols = SlotColumns();
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << "\n";
  for (const SlotRecord& r : records) WriteCsvRecord(out, r);
}

void WriteSummaries(std::ostream& out, OutputFormat format, const ScenarioConfig& base,
                    const std::vector<SummaryRow>& rows) {
  if (format == OutputFormat::kJsonl) {
    out << nlohmann::ordered_json{{"config", ConfigJson(base)}}.dump() << "\n";
    for (const SummaryRow& row : rows) {
      const RunSummary& s = row.summary;
      nlohmann::ordered_json j;
      j["series"] = row.series;
      j["parameter"] = row.parameter;
      j["value"] = row.value;
      j["replicate"] = row.replicate;
      j["seed"] = row.seed;
      j["deliveries"] = s.deliveries;
      j["mean_inst_aoi"] = JsonNumber(s.mean_inst_aoi);
      j["mean_inst_aoi_post_warmup"] = JsonNumber(s.mean_inst_aoi_post_warmup);
      j["mean_service_rate"] = JsonNumber(s.mean_service_rate);
      j["mean_service_rate_post_warmup"] = JsonNumber(s.mean_service_rate_post_warmup);
      j["rach_failures"] = s.rach_failures;
      j["duplicate_failures"] = s.duplicate_failures;
      j["outage_failures"] = s.outage_failures;
      out << j.dump() << "\n";
    }
    return;
  }
  out << ConfigEcho(base);
  out << "series,parameter,value,replicate,seed,deliveries,mean_inst_aoi,"
         "mean_inst_aoi_post_warmup,mean_service_rate,mean_service_rate_post_warmup,"
         "rach_failures,duplicate_failures,outage_failures\n";
  for (const SummaryRow& row : rows) {
    const RunSummary& s = row.summary;
    out << row.series << ',' << row.parameter << ',' << row.value << ',' << row.replicate << ','
        << row.seed << ',' << s.deliveries << ',' << FormatNumber(s.mean_inst_aoi) << ','
        << FormatNumber(s.mean_inst_aoi_post_warmup) << ','
        << FormatNumber(s.mean_service_rate) << ','
        << FormatNumber(s.mean_service_rate_post_warmup) << ',' << s.rach_failures << ','
        << s.duplicate_failures << ',' << s.outage_failures << "\n";
  }
}

void WriteTrajectories(std::ostream& out, OutputFormat format, const ScenarioConfig& base,
                       const std::vector<TrajectoryRow>& rows) {
  if (format == OutputFormat::kJsonl) {
    out << nlohmann::ordered_json{{"config", ConfigJson(base)}}.dump() << "\n";
    for (const TrajectoryRow& row : rows) {
      for (const SlotRecord& r : row.records) {
        nlohmann::ordered_json j;
        j["series"] = row.series;
        j["parameter"] = row.parameter;
        j["value"] = row.value;
        j["replicate"] = row.replicate;
        j["seed"] = row.seed;
        AddRecordFields(j, r);
        out << j.dump() << "\n";
      }
    }
    return;
  }
  out << ConfigEcho(base);
  out << "series,parameter,value,replicate,seed";
  for (const std::string& col : SlotColumns()) out << ',' << col;
  out << "\n";
  for (const TrajectoryRow& row : rows) {
    for (const SlotRecord& r : row.records) {
      out << row.series << ',' << row.parameter << ',' << row.value << ',' << row.replicate
          << ',' << row.seed << ',';
      WriteCsvRecord(out, r);
    }
  }
}

}  // namespace aoisim
