#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "engine.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace maxmin {

inline constexpr std::uint64_t kDefaultOracleLimit = 10'000'000;

struct OracleResult {
  double optimal_makespan = 0.0;
  // partition[j] holds the cloudlet ids placed on instance.vms[j].
  std::vector<std::vector<CloudletId>> optimal_partition;
  std::uint64_t instances_enumerated = 0;
};

namespace detail {

// base^exponent, saturating to max() on overflow.
inline std::uint64_t saturating_power(std::uint64_t base, std::size_t exponent) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (base != 0 && result > kMax / base) return kMax;
    result *= base;
  }
  return result;
}

}  // namespace detail

/// Exact minimum makespan by enumerating every cloudlet-to-VM assignment.
/// Within one VM the order does not matter, so N^n partitions suffice.
/// Among optimal assignments the lexicographically smallest vector (VM
/// position per cloudlet, in instance order) is reported.
inline OracleResult optimal_makespan(const Instance& instance, std::uint64_t limit = kDefaultOracleLimit) {
  if (instance.empty()) throw EmptyInstanceError();
  const std::size_t n = instance.cloudlets.size();
  const std::size_t vm_count = instance.vms.size();
  const std::uint64_t total = detail::saturating_power(vm_count, n);
  if (total > limit) {
    throw InstanceTooLargeError(detail::concat("instance too large: N^n = ", vm_count, "^", n,
                                               total == std::numeric_limits<std::uint64_t>::max()
                                                   ? std::string(" overflows 64 bits")
                                                   : " = " + std::to_string(total),
                                               " exceeds limit ", limit));
  }

  const auto etc = build_etc(instance);
  std::vector<std::size_t> assignment(n, 0);
  std::vector<std::size_t> best_assignment;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> load(vm_count);

  // Odometer with cloudlet 0 as the most significant digit, so the first
  // strict improvement found is also the lexicographically smallest.
  for (std::uint64_t count = 0; count < total; ++count) {
    std::fill(load.begin(), load.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) load[assignment[i]] += etc(i, assignment[i]);
    const double makespan = *std::max_element(load.begin(), load.end());
    if (makespan < best) {
      best = makespan;
      best_assignment = assignment;
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++assignment[i] < vm_count) break;
      assignment[i] = 0;
    }
  }

  OracleResult result;
  result.optimal_makespan = best;
  result.instances_enumerated = total;
  result.optimal_partition.resize(vm_count);
  for (std::size_t i = 0; i < n; ++i) {
    result.optimal_partition[best_assignment[i]].push_back(instance.cloudlets[i].id);
  }
  return result;
}

struct DominanceReport {
  double optimal_makespan = 0.0;
  // Heuristic makespan / optimal, keyed by policy name.
  std::map<std::string, double> ratio_to_optimal;
};

/// Confirms the optimum lower-bounds every heuristic. Throws
/// DominanceViolation naming the first offending policy.
inline DominanceReport check_dominance(const OracleResult& oracle,
                                       const std::map<std::string, double>& heuristic_makespans) {
  DominanceReport report;
  report.optimal_makespan = oracle.optimal_makespan;
  for (const auto& [policy, makespan] : heuristic_makespans) {
    if (makespan < oracle.optimal_makespan - kTimeTolerance) {
      throw DominanceViolation(detail::concat("dominance violation: policy ", policy, " makespan ", makespan,
                                              " below optimal ", oracle.optimal_makespan));
    }
    report.ratio_to_optimal[policy] = makespan / oracle.optimal_makespan;
  }
  return report;
}

inline DominanceReport check_dominance(const Instance& instance,
                                       const std::map<std::string, double>& heuristic_makespans,
                                       std::uint64_t limit = kDefaultOracleLimit) {
  return check_dominance(optimal_makespan(instance, limit), heuristic_makespans);
}

}  // namespace maxmin
