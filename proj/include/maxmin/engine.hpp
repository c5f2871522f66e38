#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace maxmin {

/// Seconds to run `cloudlet` on `vm` (MI / MIPS).
inline double execution_time(const Cloudlet& cloudlet, const VmSpec& vm) noexcept {
  return cloudlet.length / vm.mips;
}

/// Completion time of a task with execution time `et` on a VM that becomes
/// free at `ready`.
inline constexpr double completion_time(double et, double ready) noexcept { return et + ready; }

/// Expected-time-to-compute table, row per cloudlet and column per VM, both
/// in instance order.
class EtcMatrix {
 public:
  EtcMatrix() = default;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t cloudlet, std::size_t vm) const noexcept { return values_[cloudlet * cols_ + vm]; }

  std::span<const double> row(std::size_t cloudlet) const noexcept {
    return {values_.data() + cloudlet * cols_, cols_};
  }

  /// Fastest possible execution time of each cloudlet.
  std::vector<double> row_minima() const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      auto r = row(i);
      out[i] = *std::min_element(r.begin(), r.end());
    }
    return out;
  }

 private:
  friend EtcMatrix build_etc(const Instance& instance);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

inline EtcMatrix build_etc(const Instance& instance) {
  if (instance.empty()) throw EmptyInstanceError();
  EtcMatrix etc;
  etc.rows_ = instance.cloudlets.size();
  etc.cols_ = instance.vms.size();
  etc.values_.reserve(etc.rows_ * etc.cols_);
  for (const auto& c : instance.cloudlets) {
    for (const auto& v : instance.vms) etc.values_.push_back(execution_time(c, v));
  }
  return etc;
}

/// One scheduling decision: place `cloudlet_id` on `vm_id`.
struct Decision {
  CloudletId cloudlet_id = 0;
  VmId vm_id = 0;

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Turns an ordered decision list into a Schedule. Each VM runs its tasks
/// back to back in decision order starting at time 0.
inline Schedule realize(std::span<const Decision> decisions, const Instance& instance) {
  if (instance.empty()) throw EmptyInstanceError();

  std::unordered_map<CloudletId, std::size_t> cloudlet_index;
  for (std::size_t i = 0; i < instance.cloudlets.size(); ++i) cloudlet_index.emplace(instance.cloudlets[i].id, i);
  std::unordered_map<VmId, std::size_t> vm_index;
  for (std::size_t j = 0; j < instance.vms.size(); ++j) vm_index.emplace(instance.vms[j].id, j);

  Schedule schedule;
  schedule.ready_times.assign(instance.vms.size(), 0.0);
  schedule.assignments.reserve(decisions.size());
  std::vector<bool> placed(instance.cloudlets.size(), false);

  for (const auto& d : decisions) {
    auto c = cloudlet_index.find(d.cloudlet_id);
    if (c == cloudlet_index.end()) throw UnknownIdError(detail::concat("unknown cloudlet id ", d.cloudlet_id));
    auto v = vm_index.find(d.vm_id);
    if (v == vm_index.end()) throw UnknownIdError(detail::concat("unknown vm id ", d.vm_id));
    if (placed[c->second]) throw CoverageError(detail::concat("cloudlet ", d.cloudlet_id, " decided twice"));
    placed[c->second] = true;

    double& ready = schedule.ready_times[v->second];
    const double et = execution_time(instance.cloudlets[c->second], instance.vms[v->second]);
    Assignment a{d.cloudlet_id, d.vm_id, ready, completion_time(et, ready), et};
    ready = a.finish;
    schedule.assignments.push_back(a);
  }

  for (std::size_t i = 0; i < placed.size(); ++i) {
    if (!placed[i]) throw CoverageError(detail::concat("cloudlet ", instance.cloudlets[i].id, " never decided"));
  }
  schedule.makespan = *std::max_element(schedule.ready_times.begin(), schedule.ready_times.end());
  return schedule;
}

inline Schedule realize(const std::vector<Decision>& decisions, const Instance& instance) {
  return realize(std::span<const Decision>(decisions), instance);
}

// Share of the workload, by count, treated as "small tasks" when measuring
// how long the shortest cloudlets wait.
inline constexpr double kSmallTaskFraction = 0.25;

struct MetricsRow {
  double makespan = 0.0;
  double mean_completion = 0.0;
  double small_task_mean_completion = 0.0;
  std::vector<double> per_vm_utilization;
  double total_busy = 0.0;

  double min_utilization() const {
    return per_vm_utilization.empty() ? 0.0
                                      : *std::min_element(per_vm_utilization.begin(), per_vm_utilization.end());
  }
  double max_utilization() const {
    return per_vm_utilization.empty() ? 0.0
                                      : *std::max_element(per_vm_utilization.begin(), per_vm_utilization.end());
  }
};

/// ceil(n * fraction), clamped to [1, n] for n > 0.
inline std::size_t small_task_count(std::size_t n, double fraction = kSmallTaskFraction) {
  if (n == 0) return 0;
  auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * fraction - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

/// Ids of the `small_task_count(n)` shortest cloudlets, ties by id.
inline std::vector<CloudletId> small_task_ids(const Instance& instance, double fraction = kSmallTaskFraction) {
  std::vector<Cloudlet> sorted = instance.cloudlets;
  std::sort(sorted.begin(), sorted.end(), [](const Cloudlet& a, const Cloudlet& b) {
    return a.length != b.length ? a.length < b.length : a.id < b.id;
  });
  sorted.resize(small_task_count(sorted.size(), fraction));
  std::vector<CloudletId> ids;
  ids.reserve(sorted.size());
  for (const auto& c : sorted) ids.push_back(c.id);
  return ids;
}

inline MetricsRow metrics(const Schedule& schedule, const Instance& instance,
                          double small_fraction = kSmallTaskFraction) {
  auto report = validate_schedule(schedule, instance);
  if (!report.ok) {
    std::string message = "invalid schedule:";
    for (const auto& v : report.violations) message += " " + v + ";";
    throw ValidationError(message);
  }

  MetricsRow row;
  row.makespan = schedule.makespan;

  std::unordered_map<CloudletId, double> finish;
  double finish_sum = 0.0;
  for (const auto& a : schedule.assignments) {
    finish.emplace(a.cloudlet_id, a.finish);
    finish_sum += a.finish;
  }
  row.mean_completion = finish_sum / static_cast<double>(schedule.assignments.size());

  const auto small = small_task_ids(instance, small_fraction);
  double small_sum = 0.0;
  for (auto id : small) small_sum += finish.at(id);
  row.small_task_mean_completion = small_sum / static_cast<double>(small.size());

  row.per_vm_utilization.reserve(schedule.ready_times.size());
  for (double busy : schedule.ready_times) {
    row.per_vm_utilization.push_back(busy / schedule.makespan);
    row.total_busy += busy;
  }
  return row;
}

}  // namespace maxmin
