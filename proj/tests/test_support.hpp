#pragma once

// Fuzz generators and reference implementations shared by the test suites.
// The references here deliberately avoid the library's scheduling code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "maxmin/maxmin.hpp"

namespace maxmin::support {

enum class LengthShape { uniform, bimodal };

struct FuzzParams {
  std::size_t min_tasks = 2;
  std::size_t max_tasks = 7;
  std::size_t min_vms = 2;
  std::size_t max_vms = 3;
};

inline Instance random_instance(std::uint64_t seed, const FuzzParams& p = {}, LengthShape shape = LengthShape::uniform) {
  std::mt19937_64 rng(seed);
  const auto n = p.min_tasks + static_cast<std::size_t>(rng() % (p.max_tasks - p.min_tasks + 1));
  const auto vm_count = p.min_vms + static_cast<std::size_t>(rng() % (p.max_vms - p.min_vms + 1));

  Instance instance;
  if (shape == LengthShape::uniform) {
    instance.cloudlets = gen_synthetic(UniformLengths{1.0, 1000.0}, n, rng());
  } else {
    instance.cloudlets = gen_synthetic(BimodalLengths{10.0, 20.0, 100.0, 200.0, 0.7}, n, rng());
  }
  std::vector<double> speeds;
  for (std::size_t j = 0; j < vm_count; ++j) speeds.push_back(50.0 + 950.0 * detail::unit_interval(rng));
  instance.vms = make_vm_pool_from_list(speeds);
  return instance;
}

inline double sum_execution_times(const Instance& instance, std::size_t vm) {
  double total = 0.0;
  for (const auto& c : instance.cloudlets) total += c.length / instance.vms[vm].mips;
  return total;
}

// Minimum makespan by plain recursion over every assignment.
inline double brute_force_optimum(const Instance& instance) {
  std::vector<double> load(instance.vms.size(), 0.0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (i == instance.cloudlets.size()) {
      best = std::min(best, *std::max_element(load.begin(), load.end()));
      return;
    }
    for (std::size_t j = 0; j < load.size(); ++j) {
      const double et = instance.cloudlets[i].length / instance.vms[j].mips;
      load[j] += et;
      place(i + 1);
      load[j] -= et;
    }
  };
  place(0);
  return best;
}

// Textbook Max-Min / Min-Min: recompute the whole completion-time table
// every round. `largest` selects Max-Min. Groups (cloudlet positions) are
// exhausted one after another with ready times carried over.
inline std::vector<Decision> naive_selection(const Instance& instance, bool largest,
                                             const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<double> ready(instance.vms.size(), 0.0);
  std::vector<Decision> out;
  auto run_group = [&](std::vector<std::size_t> open) {
    while (!open.empty()) {
      std::size_t pick_pos = 0, pick_vm = 0;
      double pick_ct = 0.0;
      for (std::size_t k = 0; k < open.size(); ++k) {
        const auto& c = instance.cloudlets[open[k]];
        std::size_t best_vm = 0;
        double best_ct = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ready.size(); ++j) {
          const double ct = c.length / instance.vms[j].mips + ready[j];
          if (ct < best_ct || (ct == best_ct && instance.vms[j].id < instance.vms[best_vm].id)) {
            best_ct = ct;
            best_vm = j;
          }
        }
        const bool first = k == 0;
        const auto& incumbent = instance.cloudlets[open[pick_pos]];
        const bool better = largest ? best_ct > pick_ct : best_ct < pick_ct;
        if (first || better || (best_ct == pick_ct && c.id < incumbent.id)) {
          pick_pos = k;
          pick_vm = best_vm;
          pick_ct = best_ct;
        }
      }
      const auto& chosen = instance.cloudlets[open[pick_pos]];
      ready[pick_vm] = chosen.length / instance.vms[pick_vm].mips + ready[pick_vm];
      out.push_back({chosen.id, instance.vms[pick_vm].id});
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick_pos));
    }
  };

  for (const auto& g : groups) run_group(g);
  return out;
}

inline std::vector<Decision> naive_selection(const Instance& instance, bool largest) {
  std::vector<std::size_t> all(instance.cloudlets.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return naive_selection(instance, largest, {all});
}

// Ascending-length positions cut into ceil(n / N) sized groups.
inline std::vector<std::vector<std::size_t>> naive_batches(const Instance& instance) {
  std::vector<std::size_t> order(instance.cloudlets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = instance.cloudlets[a];
    const auto& y = instance.cloudlets[b];
    return x.length < y.length || (x.length == y.length && x.id < y.id);
  });
  const std::size_t size = (order.size() + instance.vms.size() - 1) / instance.vms.size();
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k % size == 0) groups.emplace_back();
    groups.back().push_back(order[k]);
  }
  return groups;
}

inline Instance permuted(const Instance& instance, std::uint64_t seed) {
  Instance out = instance;
  std::mt19937_64 rng(seed);
  for (std::size_t i = out.cloudlets.size(); i > 1; --i) std::swap(out.cloudlets[i - 1], out.cloudlets[rng() % i]);
  return out;
}


// Best completion time of cloudlet position `i` given ready times.
inline double best_completion(const Instance& inst, const std::vector<double>& ready, std::size_t i) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ready.size(); ++j) best = std::min(best, inst.cloudlets[i].length / inst.vms[j].mips + ready[j]);
  return best;
}

inline std::size_t position_of(const Instance& inst, CloudletId id) {
  for (std::size_t i = 0; i < inst.cloudlets.size(); ++i) {
    if (inst.cloudlets[i].id == id) return i;
  }
  return inst.cloudlets.size();
}

inline std::size_t vm_position_of(const Instance& inst, VmId id) {
  for (std::size_t j = 0; j < inst.vms.size(); ++j) {
    if (inst.vms[j].id == id) return j;
  }
  return inst.vms.size();
}

inline std::set<std::size_t> everything(const Instance& inst) {
  std::set<std::size_t> all;
  for (std::size_t i = 0; i < inst.cloudlets.size(); ++i) all.insert(i);
  return all;
}

// Replays a decision list phase by phase. At every step the chosen cloudlet
// must have an extremal best completion time among the open cloudlets of
// its phase, and must land on a VM achieving it. Empty string when it holds.
inline std::string selection_violation(const Instance& inst, const std::vector<Decision>& decisions, bool largest,
                                       const std::vector<std::set<std::size_t>>& phases) {
  std::vector<double> ready(inst.vms.size(), 0.0);
  std::size_t step = 0;
  for (const auto& phase : phases) {
    std::set<std::size_t> open = phase;
    while (!open.empty()) {
      if (step >= decisions.size()) return "ran out of decisions";
      const auto chosen = position_of(inst, decisions[step].cloudlet_id);
      if (!open.count(chosen)) return "step " + std::to_string(step) + " left its phase";
      const double chosen_ct = best_completion(inst, ready, chosen);
      for (auto other : open) {
        const double ct = best_completion(inst, ready, other);
        if (largest ? ct > chosen_ct : ct < chosen_ct) {
          return "step " + std::to_string(step) + ": cloudlet " + std::to_string(inst.cloudlets[other].id) +
                 " has a more extreme best completion time";
        }
      }
      const auto vm = vm_position_of(inst, decisions[step].vm_id);
      if (vm == inst.vms.size()) return "unknown vm";
      const double placed_ct = inst.cloudlets[chosen].length / inst.vms[vm].mips + ready[vm];
      if (placed_ct != chosen_ct) return "step " + std::to_string(step) + ": not an arg-min VM";
      ready[vm] = placed_ct;
      open.erase(chosen);
      ++step;
    }
  }
  return step == decisions.size() ? "" : "extra decisions";
}

// Checks that decision k belongs to the earliest batch not yet exhausted.
inline std::string batch_violation(const BatchPlan& plan, const std::vector<Decision>& decisions) {
  std::size_t batch = 0, used = 0;
  for (std::size_t k = 0; k < decisions.size(); ++k) {
    while (batch < plan.batches.size() && used == plan.batches[batch].size()) {
      ++batch;
      used = 0;
    }
    if (batch == plan.batches.size()) return "more decisions than batch members";
    const auto& members = plan.batches[batch];
    if (std::find(members.begin(), members.end(), decisions[k].cloudlet_id) == members.end()) {
      return "decision " + std::to_string(k) + " is outside batch " + std::to_string(batch);
    }
    ++used;
  }
  return "";
}

inline Instance scaled(Instance inst, double length_factor, double mips_factor) {
  for (auto& c : inst.cloudlets) c.length *= length_factor;
  for (auto& v : inst.vms) v.mips *= mips_factor;
  return inst;
}

}  // namespace maxmin::support
