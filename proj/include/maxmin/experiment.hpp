#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "engine.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "schedulers.hpp"
#include "workload.hpp"

namespace maxmin {

enum class WorkloadSource { dax_file, csv_file, synthetic };

inline constexpr std::string_view to_string(WorkloadSource s) noexcept {
  switch (s) {
    case WorkloadSource::dax_file: return "dax-file";
    case WorkloadSource::csv_file: return "csv-file";
    case WorkloadSource::synthetic: return "synthetic";
  }
  return "unknown";
}

struct WorkloadSpec {
  std::string label;
  WorkloadSource source = WorkloadSource::synthetic;
  std::optional<std::filesystem::path> path;
  double reference_mips = kDefaultReferenceMips;
  std::optional<LengthDistribution> distribution;
  std::optional<std::size_t> count;
  std::uint64_t seed = 0;
};

// Default heterogeneous pool: 15 VMs cycling these speeds.
inline const std::vector<double> kDefaultMipsPattern = {250, 500, 750, 1000, 1250};
inline constexpr std::size_t kDefaultVmCount = 15;
inline constexpr std::size_t kDefaultDatacenters = 2;

struct VmPoolSpec {
  std::size_t n = kDefaultVmCount;
  std::vector<double> mips = kDefaultMipsPattern;
  bool cyclic = true;
  std::size_t datacenters = kDefaultDatacenters;

  std::vector<VmSpec> build() const { return make_vm_pool(n, mips, cyclic, datacenters); }
};

struct ExperimentConfig {
  std::vector<WorkloadSpec> workloads;
  std::vector<std::size_t> loads = {50, 100, 1000};
  VmPoolSpec vm_pool;
  std::vector<PolicyId> policies = {kAllPolicies.begin(), kAllPolicies.end()};
  std::vector<std::uint64_t> seeds = {1};
  std::filesystem::path output;
  std::set<std::string> formats = {"csv"};
};

struct RunResult {
  std::string label;
  std::size_t load = 0;
  PolicyId policy = PolicyId::max_min;
  std::uint64_t seed = 0;
  MetricsRow metrics;
  std::int64_t wall_time_ms = 0;
};

struct RowError {
  std::string label;
  std::size_t load = 0;
  std::string policy;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentOutcome {
  std::vector<RunResult> rows;
  std::vector<RowError> errors;

  bool ok() const noexcept { return errors.empty(); }
};

inline constexpr std::string_view kResultsCsvHeader =
    "label,load,policy,seed,makespan_s,mean_completion_s,small_task_mean_completion_s,min_utilization,max_utilization,"
    "wall_time_ms";

inline void validate_config(const ExperimentConfig& config) {
  if (config.workloads.empty()) throw ConfigError("config needs at least one workload");
  if (config.loads.empty()) throw ConfigError("config needs at least one load");
  if (config.policies.empty()) throw ConfigError("config needs at least one policy");
  if (config.seeds.empty()) throw ConfigError("config needs at least one seed");
  std::set<std::string> labels;
  for (const auto& w : config.workloads) {
    if (w.label.empty()) throw ConfigError("workload label must not be empty");
    if (!labels.insert(w.label).second) throw ConfigError("duplicate workload label '" + w.label + "'");
    if (!(w.reference_mips > 0.0)) throw ConfigError("workload '" + w.label + "': reference_mips must be positive");
    if (w.count && *w.count == 0) throw ConfigError("workload '" + w.label + "': count must be >= 1");
    if (w.source == WorkloadSource::synthetic) {
      if (!w.distribution) throw ConfigError("workload '" + w.label + "': synthetic source needs a distribution");
      check_descriptor(*w.distribution);
    } else if (!w.path) {
      throw ConfigError("workload '" + w.label + "': file source needs a path");
    }
  }
  for (auto load : config.loads) {
    if (load == 0) throw ConfigError("loads must be positive");
  }
  for (const auto& f : config.formats) {
    if (f != "csv" && f != "json") throw ConfigError("unknown output format '" + f + "'");
  }
  if (config.vm_pool.n == 0) throw ConfigError("vm_pool.n must be >= 1");
  if (!config.vm_pool.cyclic && config.vm_pool.mips.size() != config.vm_pool.n) {
    throw ConfigError("vm_pool.mips_list length must equal vm_pool.n");
  }
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

inline LengthDistribution distribution_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return UniformLengths{j.at("lo").get<double>(), j.at("hi").get<double>()};
  if (kind == "bimodal") {
    return BimodalLengths{j.at("light_lo").get<double>(), j.at("light_hi").get<double>(),
                          j.at("heavy_lo").get<double>(), j.at("heavy_hi").get<double>(),
                          j.at("heavy_fraction").get<double>()};
  }
  throw ConfigError("unknown distribution kind '" + kind + "'");
}

inline std::string fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace detail

/// Builds a config from its JSON text. Relative workload paths resolve
/// against `base_dir` (normally the config file's directory).
inline ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {}) {
  using nlohmann::json;
  ExperimentConfig config;
  try {
    const json doc = json::parse(json_text);
    for (const auto& w : doc.at("workloads")) {
      WorkloadSpec spec;
      spec.label = w.at("label").get<std::string>();
      const auto source = w.at("source").get<std::string>();
      if (source == "dax-file") spec.source = WorkloadSource::dax_file;
      else if (source == "csv-file") spec.source = WorkloadSource::csv_file;
      else if (source == "synthetic") spec.source = WorkloadSource::synthetic;
      else throw ConfigError("workload '" + spec.label + "': unknown source '" + source + "'");
      if (w.contains("path")) {
        std::filesystem::path p = w.at("path").get<std::string>();
        spec.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
      }
      spec.reference_mips = w.value("reference_mips", kDefaultReferenceMips);
      if (w.contains("distribution")) spec.distribution = detail::distribution_from_json(w.at("distribution"));
      if (w.contains("count")) spec.count = w.at("count").get<std::size_t>();
      spec.seed = w.value("seed", std::uint64_t{0});
      config.workloads.push_back(std::move(spec));
    }
    if (doc.contains("loads")) config.loads = doc.at("loads").get<std::vector<std::size_t>>();
    if (doc.contains("vm_pool")) {
      const auto& pool = doc.at("vm_pool");
      config.vm_pool.n = pool.value("n", kDefaultVmCount);
      if (pool.contains("mips_list")) {
        config.vm_pool.mips = pool.at("mips_list").get<std::vector<double>>();
        config.vm_pool.cyclic = false;
      } else if (pool.contains("mips_pattern")) {
        config.vm_pool.mips = pool.at("mips_pattern").get<std::vector<double>>();
      }
      config.vm_pool.datacenters = pool.value("datacenters", kDefaultDatacenters);
    }
    if (doc.contains("policies")) {
      config.policies.clear();
      for (const auto& name : doc.at("policies")) {
        auto p = policy_from_string(name.get<std::string>());
        if (!p) throw ConfigError("unknown policy '" + name.get<std::string>() + "'");
        config.policies.push_back(*p);
      }
    }
    if (doc.contains("seeds")) config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    if (doc.contains("output")) {
      std::filesystem::path out = doc.at("output").get<std::string>();
      config.output = out.is_relative() && !base_dir.empty() ? base_dir / out : out;
    }
    if (doc.contains("formats")) {
      config.formats.clear();
      for (const auto& f : doc.at("formats")) config.formats.insert(f.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate_config(config);
  return config;
}

/// Cloudlets for one (workload, load, seed) cell. `file_text` is the
/// already-read file contents for file-backed sources.
inline std::vector<Cloudlet> materialize(const WorkloadSpec& spec, std::size_t load, std::uint64_t seed,
                                         const std::string& file_text = {}) {
  switch (spec.source) {
    case WorkloadSource::synthetic: return gen_synthetic(*spec.distribution, load, seed);
    case WorkloadSource::dax_file: return select_count(parse_dax(file_text, spec.reference_mips), load, seed);
    case WorkloadSource::csv_file: return select_count(parse_csv(file_text), load, seed);
  }
  throw ConfigError("unknown workload source");
}

/// Standalone load of a spec using its own count and seed.
inline std::vector<Cloudlet> load_workload(const WorkloadSpec& spec) {
  std::string text;
  if (spec.source != WorkloadSource::synthetic) text = detail::read_file(*spec.path);
  if (spec.count) return materialize(spec, *spec.count, spec.seed, text);
  if (spec.source == WorkloadSource::dax_file) return parse_dax(text, spec.reference_mips);
  if (spec.source == WorkloadSource::csv_file) return parse_csv(text);
  throw ConfigError("synthetic workload '" + spec.label + "' needs a count");
}

inline bool row_less(const RunResult& a, const RunResult& b) {
  return std::forward_as_tuple(a.label, a.load, to_string(a.policy), a.seed) <
         std::forward_as_tuple(b.label, b.load, to_string(b.policy), b.seed);
}

inline std::string results_to_csv(const std::vector<RunResult>& rows, bool include_wall_time = true) {
  std::string out(kResultsCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.label + ',' + std::to_string(r.load) + ',' + std::string(to_string(r.policy)) + ',' +
           std::to_string(r.seed) + ',' + detail::fixed(r.metrics.makespan) + ',' +
           detail::fixed(r.metrics.mean_completion) + ',' + detail::fixed(r.metrics.small_task_mean_completion) + ',' +
           detail::fixed(r.metrics.min_utilization()) + ',' + detail::fixed(r.metrics.max_utilization()) + ',' +
           std::to_string(include_wall_time ? r.wall_time_ms : 0) + '\n';
  }
  return out;
}

inline std::string results_to_json(const std::vector<RunResult>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"label", r.label},
                   {"load", r.load},
                   {"policy", std::string(to_string(r.policy))},
                   {"seed", r.seed},
                   {"makespan_s", r.metrics.makespan},
                   {"mean_completion_s", r.metrics.mean_completion},
                   {"small_task_mean_completion_s", r.metrics.small_task_mean_completion},
                   {"min_utilization", r.metrics.min_utilization()},
                   {"max_utilization", r.metrics.max_utilization()},
                   {"wall_time_ms", r.wall_time_ms}});
  }
  return arr.dump(2) + "\n";
}

/// Runs workloads x loads x policies x seeds. Rows come back sorted by
/// (label, load, policy, seed). A failing cell becomes a RowError; the
/// remaining cells still run. Writes results.{csv,json} when
/// `config.output` is set.
inline ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentOutcome outcome;
  const auto vms = config.vm_pool.build();

  for (const auto& spec : config.workloads) {
    std::string text;
    std::string read_error;
    if (spec.source != WorkloadSource::synthetic) {
      try {
        text = detail::read_file(*spec.path);
      } catch (const Error& e) {
        read_error = e.what();
      }
    }
    for (auto load : config.loads) {
      for (auto seed : config.seeds) {
        Instance instance;
        std::string workload_error = read_error;
        if (workload_error.empty()) {
          try {
            instance = Instance{materialize(spec, load, seed, text), vms};
          } catch (const Error& e) {
            workload_error = e.what();
          }
        }
        for (auto policy : config.policies) {
          if (!workload_error.empty()) {
            outcome.errors.push_back({spec.label, load, std::string(to_string(policy)), seed, workload_error});
            continue;
          }
          try {
            const auto started = std::chrono::steady_clock::now();
            auto result = schedule(policy, instance);
            auto row_metrics = metrics(result, instance);
            const auto elapsed = std::chrono::steady_clock::now() - started;
            outcome.rows.push_back({spec.label, load, policy, seed, std::move(row_metrics),
                                    std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()});
          } catch (const Error& e) {
            outcome.errors.push_back({spec.label, load, std::string(to_string(policy)), seed, e.what()});
          }
        }
      }
    }
  }

  std::sort(outcome.rows.begin(), outcome.rows.end(), row_less);

  if (!config.output.empty()) {
    std::filesystem::create_directories(config.output);
    if (config.formats.count("csv")) detail::write_file(config.output / "results.csv", results_to_csv(outcome.rows));
    if (config.formats.count("json")) detail::write_file(config.output / "results.json", results_to_json(outcome.rows));
  }
  return outcome;
}

// ---- comparison -----------------------------------------------------------

/// Makespan of one policy in one (label, load) cell. Policy is a free-form
/// name so reference tables can carry algorithms this library does not run.
struct MakespanRecord {
  std::string label;
  std::size_t load = 0;
  std::string policy;
  std::uint64_t seed = 0;
  double makespan = 0.0;
};

struct RankedCell {
  std::string label;
  std::size_t load = 0;
  // (policy, mean makespan over seeds), ascending; front() is the winner.
  std::vector<std::pair<std::string, double>> ranking;

  const std::string& winner() const { return ranking.front().first; }
};

struct ComparisonReport {
  std::vector<RankedCell> cells;
  std::vector<std::string> warnings;
};

inline std::vector<MakespanRecord> to_records(const std::vector<RunResult>& rows) {
  std::vector<MakespanRecord> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r.label, r.load, std::string(to_string(r.policy)), r.seed, r.metrics.makespan});
  return out;
}

/// Reads the label, load, policy, seed and makespan_s columns of a results
/// CSV. Other columns may be blank.
inline std::vector<MakespanRecord> parse_results_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("results CSV is empty", 1);

  auto split = [](std::string_view s) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
      if (k == s.size() || s[k] == ',') {
        fields.push_back(detail::trim(s.substr(start, k - start)));
        start = k + 1;
      }
    }
    return fields;
  };

  const auto header = split(detail::trim(line));
  auto column = [&header](std::string_view name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("results CSV lacks column '" + std::string(name) + "'", 1);
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_label = column("label"), c_load = column("load"), c_policy = column("policy"),
             c_seed = column("seed"), c_makespan = column("makespan_s");

  std::vector<MakespanRecord> records;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto f = split(detail::trim(line));
    if (f.size() != header.size()) throw ParseError("expected " + std::to_string(header.size()) + " fields", line_no);
    const auto load = detail::parse_uint(f[c_load]);
    const auto seed = detail::parse_uint(f[c_seed]);
    const auto makespan = detail::parse_double(f[c_makespan]);
    if (!load || !seed || !makespan) throw ParseError("bad numeric field", line_no);
    records.push_back({std::string(f[c_label]), *load, std::string(f[c_policy]), *seed, *makespan});
  }
  return records;
}

/// Ranks policies per (label, load) by mean makespan over seeds, ascending,
/// ties by policy name. Cells with fewer than two policies are skipped.
inline ComparisonReport compare_report(const std::vector<MakespanRecord>& records) {
  std::map<std::pair<std::string, std::size_t>, std::map<std::string, std::pair<double, std::size_t>>> cells;
  for (const auto& r : records) {
    auto& acc = cells[{r.label, r.load}][r.policy];
    acc.first += r.makespan;
    acc.second += 1;
  }

  ComparisonReport report;
  for (const auto& [key, by_policy] : cells) {
    if (by_policy.size() < 2) {
      report.warnings.push_back("skipping " + key.first + "/" + std::to_string(key.second) + ": fewer than two policies");
      continue;
    }
    RankedCell cell{key.first, key.second, {}};
    for (const auto& [policy, acc] : by_policy) cell.ranking.emplace_back(policy, acc.first / static_cast<double>(acc.second));
    std::stable_sort(cell.ranking.begin(), cell.ranking.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    report.cells.push_back(std::move(cell));
  }
  return report;
}

inline ComparisonReport compare_report(const std::vector<RunResult>& rows) { return compare_report(to_records(rows)); }

/// Published makespans (seconds) for the Inspiral and CyberShake workflows
/// at loads 50, 100 and 1000, in the results CSV schema. data_aware is only
/// ever read from here; this library does not implement it.
inline constexpr std::string_view kPaperReferenceCsv =
    "label,load,policy,seed,makespan_s,mean_completion_s,small_task_mean_completion_s,min_utilization,max_utilization,"
    "wall_time_ms\n"
    "Inspiral,50,improved_max_min,0,3085.68,,,,,\n"
    "Inspiral,50,max_min,0,3271.68,,,,,\n"
    "Inspiral,50,data_aware,0,10126.53,,,,,\n"
    "Inspiral,100,improved_max_min,0,6510.94,,,,,\n"
    "Inspiral,100,max_min,0,5486.32,,,,,\n"
    "Inspiral,100,data_aware,0,6703.38,,,,,\n"
    "Inspiral,1000,improved_max_min,0,27163.01,,,,,\n"
    "Inspiral,1000,max_min,0,28124.73,,,,,\n"
    "Inspiral,1000,data_aware,0,28051.93,,,,,\n"
    "CyberShake,50,improved_max_min,0,632.26,,,,,\n"
    "CyberShake,50,max_min,0,659.54,,,,,\n"
    "CyberShake,50,data_aware,0,826.31,,,,,\n"
    "CyberShake,100,improved_max_min,0,984.6,,,,,\n"
    "CyberShake,100,max_min,0,1023.76,,,,,\n"
    "CyberShake,100,data_aware,0,1157.7,,,,,\n"
    "CyberShake,1000,improved_max_min,0,3287.49,,,,,\n"
    "CyberShake,1000,max_min,0,3174.45,,,,,\n"
    "CyberShake,1000,data_aware,0,2531.15,,,,,\n";

inline std::vector<MakespanRecord> paper_reference_records() {
  return parse_results_csv(std::string(kPaperReferenceCsv));
}

inline std::string format_report(const ComparisonReport& report, std::string_view source) {
  std::string out;
  for (const auto& cell : report.cells) {
    out += "[" + std::string(source) + "] " + cell.label + " load=" + std::to_string(cell.load) +
           " winner=" + cell.winner() + "\n";
    for (std::size_t k = 0; k < cell.ranking.size(); ++k) {
      out += "  " + std::to_string(k + 1) + ". " + cell.ranking[k].first + " " +
             detail::fixed(cell.ranking[k].second, 2) + "\n";
    }
  }
  for (const auto& w : report.warnings) out += "warning: " + w + "\n";
  return out;
}

// ---- instance files ---------------------------------------------------------

/// {"cloudlets":[{"id":0,"length":10}], "vms":[{"id":0,"mips":1}]}
inline Instance parse_instance_json(const std::string& json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    Instance instance;
    for (const auto& c : doc.at("cloudlets")) {
      const double length = c.at("length").get<double>();
      if (!(length > 0.0)) throw ParseError("cloudlet lengths must be positive");
      instance.cloudlets.push_back({c.at("id").get<CloudletId>(), length});
    }
    for (const auto& v : doc.at("vms")) {
      const double mips = v.at("mips").get<double>();
      if (!(mips > 0.0)) throw ParseError("vm mips must be positive");
      VmSpec vm{v.at("id").get<VmId>(), mips, std::nullopt};
      if (v.contains("datacenter")) vm.datacenter_tag = v.at("datacenter").get<std::string>();
      instance.vms.push_back(std::move(vm));
    }
    return instance;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
}

inline std::string instance_to_json(const Instance& instance) {
  nlohmann::json doc;
  doc["cloudlets"] = nlohmann::json::array();
  for (const auto& c : instance.cloudlets) doc["cloudlets"].push_back({{"id", c.id}, {"length", c.length}});
  doc["vms"] = nlohmann::json::array();
  for (const auto& v : instance.vms) {
    nlohmann::json j = {{"id", v.id}, {"mips", v.mips}};
    if (v.datacenter_tag) j["datacenter"] = *v.datacenter_tag;
    doc["vms"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace maxmin
