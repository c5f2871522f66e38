// maxmin: experiment runner and utilities for the bag-of-tasks schedulers.
//
//   maxmin run <config.json> [--out DIR] [--format csv|json]...
//   maxmin gen uniform LO HI | bimodal LLO LHI HLO HHI FRAC --count N --seed S [--out FILE]
//   maxmin compare [results.csv] [--reference paper] [--out FILE]
//   maxmin oracle <instance.json|tasks.csv>... [--mips a,b,..] [--limit K]
//   maxmin oracle --fuzz N [--tasks n] [--vms N] [--seed S]
//
// Exit codes: 0 success, 1 a row or check failed, 2 usage or config error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxmin/maxmin.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : maxmin::Error {
  using maxmin::Error::Error;
};

double to_number(const std::string& text) {
  auto v = maxmin::detail::parse_double(text);
  if (!v) throw UsageError("not a number: '" + text + "'");
  return *v;
}

maxmin::LengthDistribution descriptor_from_args(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError("gen needs a descriptor: uniform LO HI | bimodal LLO LHI HLO HHI FRAC");
  if (args[0] == "uniform" && args.size() == 3) return maxmin::UniformLengths{to_number(args[1]), to_number(args[2])};
  if (args[0] == "bimodal" && args.size() == 6) {
    return maxmin::BimodalLengths{to_number(args[1]), to_number(args[2]), to_number(args[3]), to_number(args[4]),
                                  to_number(args[5])};
  }
  throw UsageError("bad descriptor: expected 'uniform LO HI' or 'bimodal LLO LHI HLO HHI FRAC'");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    maxmin::detail::write_file(out_path, text);
  }
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::vector<std::string>& formats) {
  std::string text;
  try {
    text = maxmin::detail::read_file(config_path);
  } catch (const maxmin::Error& e) {
    throw UsageError(e.what());
  }
  auto config = maxmin::parse_config(text, std::filesystem::path(config_path).parent_path());
  if (!out_dir.empty()) config.output = out_dir;
  if (!formats.empty()) config.formats = {formats.begin(), formats.end()};
  maxmin::validate_config(config);

  const auto outcome = maxmin::run_experiment(config);
  if (config.output.empty()) std::cout << maxmin::results_to_csv(outcome.rows);
  for (const auto& e : outcome.errors) {
    std::cerr << "row failed: " << e.label << " load=" << e.load << " policy=" << e.policy << " seed=" << e.seed
              << ": " << e.message << "\n";
  }
  std::cerr << outcome.rows.size() << " rows, " << outcome.errors.size() << " failed";
  if (!config.output.empty()) std::cerr << ", written to " << config.output.string();
  std::cerr << "\n";
  return outcome.ok() ? kExitOk : kExitFailed;
}

int cmd_gen(const std::vector<std::string>& descriptor, std::size_t count, std::uint64_t seed,
            const std::string& out_path) {
  const auto desc = descriptor_from_args(descriptor);
  try {
    emit(maxmin::to_csv(maxmin::gen_synthetic(desc, count, seed)), out_path);
  } catch (const maxmin::DescriptorError& e) {
    throw UsageError(e.what());
  }
  return kExitOk;
}

int cmd_compare(const std::string& results_path, const std::string& reference, const std::string& out_path) {
  if (results_path.empty() && reference.empty()) throw UsageError("compare needs a results file or --reference paper");
  if (!reference.empty() && reference != "paper") throw UsageError("--reference only accepts 'paper'");

  std::string text;
  if (!results_path.empty()) {
    text += maxmin::format_report(maxmin::compare_report(maxmin::parse_results_csv(maxmin::detail::read_file(results_path))),
                                  "results");
  }
  if (!reference.empty()) {
    text += maxmin::format_report(maxmin::compare_report(maxmin::paper_reference_records()), "source=paper");
  }
  emit(text, out_path);
  return kExitOk;
}

std::map<std::string, double> heuristic_makespans(const maxmin::Instance& instance, bool& all_valid) {
  std::map<std::string, double> out;
  for (auto policy : maxmin::kAllPolicies) {
    const auto s = maxmin::schedule(policy, instance);
    if (!maxmin::validate_schedule(s, instance).ok) all_valid = false;
    out[std::string(maxmin::to_string(policy))] = s.makespan;
  }
  return out;
}

int cmd_oracle(const std::vector<std::string>& instance_paths, const std::vector<double>& mips, std::uint64_t limit,
               std::size_t fuzz, std::size_t tasks, std::size_t vm_count, std::uint64_t seed) {
  if (fuzz > 0) {
    std::size_t violations = 0;
    double worst_max_min = 1.0;
    for (std::size_t k = 0; k < fuzz; ++k) {
      std::mt19937_64 rng(seed + k);
      maxmin::Instance instance;
      instance.cloudlets = maxmin::gen_synthetic(maxmin::UniformLengths{1.0, 100.0}, tasks, rng());
      std::vector<double> speeds;
      for (std::size_t j = 0; j < vm_count; ++j) speeds.push_back(1.0 + 9.0 * maxmin::detail::unit_interval(rng));
      instance.vms = maxmin::make_vm_pool_from_list(speeds);
      bool valid = true;
      try {
        const auto report = maxmin::check_dominance(instance, heuristic_makespans(instance, valid), limit);
        worst_max_min = std::max(worst_max_min, report.ratio_to_optimal.at("max_min"));
      } catch (const maxmin::DominanceViolation& e) {
        std::cerr << "seed " << seed + k << ": " << e.what() << "\n";
        ++violations;
      }
      if (!valid) ++violations;
    }
    std::cout << "fuzz: " << fuzz << " instances (" << tasks << " tasks x " << vm_count << " vms), " << violations
              << " violations, worst max_min ratio " << maxmin::detail::fixed(worst_max_min) << "\n";
    return violations == 0 ? kExitOk : kExitFailed;
  }

  if (instance_paths.empty()) throw UsageError("oracle needs instance files or --fuzz");
  int status = kExitOk;
  for (const auto& path : instance_paths) {
    maxmin::Instance instance;
    const auto text = maxmin::detail::read_file(path);
    if (std::filesystem::path(path).extension() == ".json") {
      instance = maxmin::parse_instance_json(text);
    } else {
      if (mips.empty()) throw UsageError(path + ": CSV instances need --mips");
      instance = {maxmin::parse_csv(text), maxmin::make_vm_pool_from_list(mips)};
    }

    const auto result = maxmin::optimal_makespan(instance, limit);
    std::cout << path << ": optimal makespan " << maxmin::detail::fixed(result.optimal_makespan) << " ("
              << result.instances_enumerated << " assignments enumerated)\n";
    for (std::size_t j = 0; j < instance.vms.size(); ++j) {
      std::cout << "  vm " << instance.vms[j].id << ":";
      for (auto id : result.optimal_partition[j]) std::cout << " " << id;
      std::cout << "\n";
    }
    bool valid = true;
    const auto makespans = heuristic_makespans(instance, valid);
    try {
      const auto report = maxmin::check_dominance(result, makespans);
      for (const auto& [policy, ratio] : report.ratio_to_optimal) {
        std::cout << "  " << policy << " makespan " << maxmin::detail::fixed(makespans.at(policy)) << " ratio "
                  << maxmin::detail::fixed(ratio) << "\n";
      }
    } catch (const maxmin::DominanceViolation& e) {
      std::cerr << e.what() << "\n";
      status = kExitFailed;
    }
    if (!valid) {
      std::cerr << path << ": a heuristic produced an invalid schedule\n";
      status = kExitFailed;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-Min family bag-of-tasks schedulers and experiment runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path, out_dir;
  std::vector<std::string> formats;
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides config)");
  run->add_option("--format", formats, "Output formats (overrides config)")->check(CLI::IsMember({"csv", "json"}));

  auto* gen = app.add_subcommand("gen", "Generate a synthetic workload CSV");
  std::vector<std::string> descriptor;
  std::size_t count = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("descriptor", descriptor, "uniform LO HI | bimodal LLO LHI HLO HHI FRAC")->required();
  gen->add_option("--count", count, "Number of cloudlets")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output file (stdout if absent)");

  auto* compare = app.add_subcommand("compare", "Rank policies per (label, load)");
  std::string results_path, reference, compare_out;
  compare->add_option("results", results_path, "Results CSV");
  compare->add_option("--reference", reference, "Embedded reference table ('paper')");
  compare->add_option("--out", compare_out, "Report file (stdout if absent)");

  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum and dominance check");
  std::vector<std::string> instance_paths;
  std::vector<double> mips;
  std::uint64_t limit = maxmin::kDefaultOracleLimit;
  std::size_t fuzz = 0, tasks = 6, vm_count = 3;
  std::uint64_t oracle_seed = 1;
  oracle->add_option("instances", instance_paths, "Instance JSON or task CSV files");
  oracle->add_option("--mips", mips, "VM speeds for CSV instances")->delimiter(',');
  oracle->add_option("--limit", limit, "Maximum N^n to enumerate");
  oracle->add_option("--fuzz", fuzz, "Check this many random instances instead");
  oracle->add_option("--tasks", tasks, "Tasks per fuzzed instance")->check(CLI::PositiveNumber);
  oracle->add_option("--vms", vm_count, "VMs per fuzzed instance")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oracle_seed, "First fuzz seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, formats);
    if (*gen) return cmd_gen(descriptor, count, gen_seed, gen_out);
    if (*compare) return cmd_compare(results_path, reference, compare_out);
    if (*oracle) return cmd_oracle(instance_paths, mips, limit, fuzz, tasks, vm_count, oracle_seed);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const maxmin::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const maxmin::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const maxmin::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
