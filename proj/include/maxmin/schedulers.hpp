#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace maxmin {

enum class PolicyId { max_min, improved_max_min, min_min, ect_list };

inline constexpr std::array<PolicyId, 4> kAllPolicies = {PolicyId::max_min, PolicyId::improved_max_min,
                                                         PolicyId::min_min, PolicyId::ect_list};

inline constexpr std::string_view to_string(PolicyId policy) noexcept {
  switch (policy) {
    case PolicyId::max_min: return "max_min";
    case PolicyId::improved_max_min: return "improved_max_min";
    case PolicyId::min_min: return "min_min";
    case PolicyId::ect_list: return "ect_list";
  }
  return "unknown";
}

inline std::optional<PolicyId> policy_from_string(std::string_view name) noexcept {
  for (auto p : kAllPolicies) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

/// The ascending-length cloudlet list cut into consecutive batches of
/// ceil(n / N) cloudlets (N = pool size). Only the last batch may be short.
struct BatchPlan {
  std::size_t batch_size = 0;
  std::vector<std::vector<CloudletId>> batches;
};

namespace detail {

inline bool shorter(const Cloudlet& a, const Cloudlet& b) {
  return a.length != b.length ? a.length < b.length : a.id < b.id;
}

enum class Pick { largest, smallest };

// Shared Max-Min / Min-Min selection loop. Each candidate keeps its best
// (completion time, VM); only candidates whose best VM just got busier are
// re-evaluated, since every other VM's ready time is unchanged.
class SelectionLoop {
 public:
  SelectionLoop(const Instance& instance, const EtcMatrix& etc)
      : instance_(instance), etc_(etc), ready_(instance.vms.size(), 0.0) {}

  void run(std::span<const std::size_t> cloudlet_indices, Pick pick) {
    struct Candidate {
      std::size_t index;
      double best_ct;
      std::size_t best_vm;
    };
    std::vector<Candidate> open;
    open.reserve(cloudlet_indices.size());
    for (auto i : cloudlet_indices) {
      auto [ct, vm] = best_vm(i);
      open.push_back({i, ct, vm});
    }

    while (!open.empty()) {
      std::size_t chosen = 0;
      for (std::size_t k = 1; k < open.size(); ++k) {
        const auto& a = open[k];
        const auto& b = open[chosen];
        const bool better = pick == Pick::largest ? a.best_ct > b.best_ct : a.best_ct < b.best_ct;
        if (better || (a.best_ct == b.best_ct && id_of(a.index) < id_of(b.index))) chosen = k;
      }
      const Candidate winner = open[chosen];
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(chosen));
      assign(winner.index, winner.best_vm);

      for (auto& c : open) {
        if (c.best_vm == winner.best_vm) std::tie(c.best_ct, c.best_vm) = best_vm(c.index);
      }
    }
  }

  // One task at a time, earliest completion time wins.
  void place_in_order(std::span<const std::size_t> cloudlet_indices) {
    for (auto i : cloudlet_indices) assign(i, best_vm(i).second);
  }

  const std::vector<Decision>& decisions() const noexcept { return decisions_; }

 private:
  CloudletId id_of(std::size_t index) const { return instance_.cloudlets[index].id; }

  std::pair<double, std::size_t> best_vm(std::size_t i) const {
    double best_ct = completion_time(etc_(i, 0), ready_[0]);
    std::size_t best = 0;
    for (std::size_t j = 1; j < ready_.size(); ++j) {
      const double ct = completion_time(etc_(i, j), ready_[j]);
      if (ct < best_ct || (ct == best_ct && instance_.vms[j].id < instance_.vms[best].id)) {
        best_ct = ct;
        best = j;
      }
    }
    return {best_ct, best};
  }

  void assign(std::size_t i, std::size_t j) {
    ready_[j] = completion_time(etc_(i, j), ready_[j]);
    decisions_.push_back({instance_.cloudlets[i].id, instance_.vms[j].id});
  }

  const Instance& instance_;
  const EtcMatrix& etc_;
  std::vector<double> ready_;
  std::vector<Decision> decisions_;
};

inline std::vector<std::size_t> all_indices(const Instance& instance) {
  std::vector<std::size_t> idx(instance.cloudlets.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

}  // namespace detail

/// Classic Max-Min: repeatedly take the unassigned cloudlet whose best
/// completion time is largest and place it on that best VM.
inline std::vector<Decision> max_min_decisions(const Instance& instance) {
  const auto etc = build_etc(instance);
  detail::SelectionLoop loop(instance, etc);
  const auto all = detail::all_indices(instance);
  loop.run(all, detail::Pick::largest);
  return loop.decisions();
}

inline Schedule max_min(const Instance& instance) { return realize(max_min_decisions(instance), instance); }

/// Min-Min: the dual of Max-Min, smallest best completion time first.
inline std::vector<Decision> min_min_decisions(const Instance& instance) {
  const auto etc = build_etc(instance);
  detail::SelectionLoop loop(instance, etc);
  const auto all = detail::all_indices(instance);
  loop.run(all, detail::Pick::smallest);
  return loop.decisions();
}

inline Schedule min_min(const Instance& instance) { return realize(min_min_decisions(instance), instance); }

inline BatchPlan eq1_batches(const Instance& instance) {
  if (instance.empty()) throw EmptyInstanceError();
  std::vector<Cloudlet> sorted = instance.cloudlets;
  std::sort(sorted.begin(), sorted.end(), detail::shorter);

  const std::size_t n = sorted.size();
  const std::size_t vm_count = instance.vms.size();
  BatchPlan plan;
  plan.batch_size = (n + vm_count - 1) / vm_count;
  for (std::size_t begin = 0; begin < n; begin += plan.batch_size) {
    const std::size_t end = std::min(n, begin + plan.batch_size);
    auto& batch = plan.batches.emplace_back();
    batch.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) batch.push_back(sorted[k].id);
  }
  return plan;
}

/// Improved Max-Min: Max-Min confined to each batch of `eq1_batches`,
/// smallest batch first. VM ready times carry over between batches.
inline std::vector<Decision> improved_max_min_decisions(const Instance& instance) {
  const auto plan = eq1_batches(instance);
  const auto etc = build_etc(instance);

  std::unordered_map<CloudletId, std::size_t> index_of;
  for (std::size_t i = 0; i < instance.cloudlets.size(); ++i) index_of.emplace(instance.cloudlets[i].id, i);

  detail::SelectionLoop loop(instance, etc);
  std::vector<std::size_t> batch_indices;
  for (const auto& batch : plan.batches) {
    batch_indices.clear();
    for (auto id : batch) batch_indices.push_back(index_of.at(id));
    loop.run(batch_indices, detail::Pick::largest);
  }
  return loop.decisions();
}

inline Schedule improved_max_min(const Instance& instance) {
  return realize(improved_max_min_decisions(instance), instance);
}

/// Greedy list scheduling in input order onto the earliest-completion VM.
inline std::vector<Decision> ect_list_decisions(const Instance& instance) {
  const auto etc = build_etc(instance);
  detail::SelectionLoop loop(instance, etc);
  const auto all = detail::all_indices(instance);
  loop.place_in_order(all);
  return loop.decisions();
}

inline Schedule ect_list(const Instance& instance) { return realize(ect_list_decisions(instance), instance); }

inline std::vector<Decision> decisions(PolicyId policy, const Instance& instance) {
  switch (policy) {
    case PolicyId::max_min: return max_min_decisions(instance);
    case PolicyId::improved_max_min: return improved_max_min_decisions(instance);
    case PolicyId::min_min: return min_min_decisions(instance);
    case PolicyId::ect_list: return ect_list_decisions(instance);
  }
  throw Error("unknown policy");
}

inline Schedule schedule(PolicyId policy, const Instance& instance) {
  return realize(decisions(policy, instance), instance);
}

}  // namespace maxmin
