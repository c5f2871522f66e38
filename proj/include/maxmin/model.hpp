#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace maxmin {

using CloudletId = std::uint64_t;
using VmId = std::uint64_t;

// Absolute tolerance, in seconds, for every invariant comparison.
inline constexpr double kTimeTolerance = 1e-9;

/// One schedulable task. Length is in million instructions (MI).
struct Cloudlet {
  CloudletId id = 0;
  double length = 0.0;

  friend bool operator==(const Cloudlet&, const Cloudlet&) = default;
};

/// One virtual machine. Speed in MIPS, so length / mips is seconds.
/// `datacenter_tag` is organizational metadata; no scheduling code reads it.
struct VmSpec {
  VmId id = 0;
  double mips = 0.0;
  std::optional<std::string> datacenter_tag;

  friend bool operator==(const VmSpec&, const VmSpec&) = default;
};

/// A workload paired with a VM pool. Emptiness is only rejected at
/// scheduling time.
struct Instance {
  std::vector<Cloudlet> cloudlets;
  std::vector<VmSpec> vms;

  bool empty() const noexcept { return cloudlets.empty() || vms.empty(); }
};

struct Assignment {
  CloudletId cloudlet_id = 0;
  VmId vm_id = 0;
  double start = 0.0;
  double finish = 0.0;
  double execution_time = 0.0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Assignments in the order they were decided. `ready_times` is aligned
/// with `Instance::vms` (position, not id).
struct Schedule {
  std::vector<Assignment> assignments;
  std::vector<double> ready_times;
  double makespan = 0.0;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

namespace detail {

template <typename... Parts>
std::string concat(const Parts&... parts) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << parts);
  return os.str();
}

inline bool near(double a, double b) { return std::abs(a - b) <= kTimeTolerance; }

}  // namespace detail

/// Checks every Schedule invariant against the instance it claims to cover.
/// Never throws on malformed input; problems come back as violations.
inline ValidationReport validate_schedule(const Schedule& schedule, const Instance& instance) {
  ValidationReport report;
  auto fail = [&report](std::string message) {
    report.ok = false;
    report.violations.push_back(std::move(message));
  };

  std::unordered_map<CloudletId, std::size_t> cloudlet_index;
  for (std::size_t i = 0; i < instance.cloudlets.size(); ++i) {
    if (!cloudlet_index.emplace(instance.cloudlets[i].id, i).second) {
      fail(detail::concat("duplicate cloudlet id ", instance.cloudlets[i].id, " in instance"));
    }
  }
  std::unordered_map<VmId, std::size_t> vm_index;
  for (std::size_t j = 0; j < instance.vms.size(); ++j) {
    if (!vm_index.emplace(instance.vms[j].id, j).second) {
      fail(detail::concat("duplicate vm id ", instance.vms[j].id, " in instance"));
    }
  }

  std::vector<int> seen(instance.cloudlets.size(), 0);
  std::vector<double> vm_clock(instance.vms.size(), 0.0);
  std::vector<double> vm_busy(instance.vms.size(), 0.0);
  double max_finish = 0.0;

  for (const auto& a : schedule.assignments) {
    auto c = cloudlet_index.find(a.cloudlet_id);
    if (c == cloudlet_index.end()) {
      fail(detail::concat("foreign cloudlet ", a.cloudlet_id));
      continue;
    }
    auto v = vm_index.find(a.vm_id);
    if (v == vm_index.end()) {
      fail(detail::concat("foreign vm ", a.vm_id, " for cloudlet ", a.cloudlet_id));
      continue;
    }
    if (++seen[c->second] == 2) fail(detail::concat("cloudlet ", a.cloudlet_id, " assigned more than once"));

    const double expected_et = instance.cloudlets[c->second].length / instance.vms[v->second].mips;
    if (!(a.execution_time > 0.0) || !detail::near(a.execution_time, expected_et)) {
      fail(detail::concat("execution time mismatch for cloudlet ", a.cloudlet_id, ": ", a.execution_time,
                          " != ", expected_et));
    }
    if (!detail::near(a.finish, a.start + a.execution_time)) {
      fail(detail::concat("finish != start + execution_time for cloudlet ", a.cloudlet_id));
    }
    if (!detail::near(a.start, vm_clock[v->second])) {
      fail(detail::concat("gap or overlap on vm ", a.vm_id, " at cloudlet ", a.cloudlet_id, ": start ", a.start,
                          ", vm free at ", vm_clock[v->second]));
    }
    vm_clock[v->second] = a.finish;
    vm_busy[v->second] += a.execution_time;
    max_finish = std::max(max_finish, a.finish);
  }

  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] == 0) fail(detail::concat("unassigned cloudlet ", instance.cloudlets[i].id));
  }

  if (schedule.ready_times.size() != instance.vms.size()) {
    fail(detail::concat("ready_times has ", schedule.ready_times.size(), " entries for ", instance.vms.size(),
                        " vms"));
  } else {
    for (std::size_t j = 0; j < vm_busy.size(); ++j) {
      if (!detail::near(schedule.ready_times[j], vm_busy[j]) || !detail::near(schedule.ready_times[j], vm_clock[j])) {
        fail(detail::concat("ready time mismatch on vm ", instance.vms[j].id, ": ", schedule.ready_times[j],
                            " != ", vm_busy[j]));
      }
    }
  }

  const double max_ready =
      schedule.ready_times.empty() ? 0.0 : *std::max_element(schedule.ready_times.begin(), schedule.ready_times.end());
  if (!detail::near(schedule.makespan, max_finish) || !detail::near(schedule.makespan, max_ready)) {
    fail(detail::concat("makespan mismatch: ", schedule.makespan, " vs max finish ", max_finish, " and max ready ",
                        max_ready));
  }
  return report;
}

}  // namespace maxmin
