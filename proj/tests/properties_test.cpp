// Fuzzed invariants over all four policies.

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "maxmin/maxmin.hpp"
#include "test_support.hpp"

using namespace maxmin;

namespace {

constexpr std::uint64_t kFuzzSeeds = 1000;
const support::FuzzParams kWide{1, 40, 1, 8};

}  // namespace

TEST(Properties, EverySchedulePassesValidation) {
  for (std::uint64_t seed = 0; seed < kFuzzSeeds; ++seed) {
    for (auto shape : {support::LengthShape::uniform, support::LengthShape::bimodal}) {
      const auto inst = support::random_instance(seed, kWide, shape);
      for (auto p : kAllPolicies) {
        const auto report = validate_schedule(schedule(p, inst), inst);
        ASSERT_TRUE(report.ok) << to_string(p) << " seed " << seed << ": " << report.violations.front();
      }
    }
  }
}

TEST(Properties, ScaleInvariance) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = support::random_instance(seed, kWide);
    // Powers of two scale exactly in binary floating point.
    for (double k : {0.25, 8.0, 1024.0}) {
      const auto big = support::scaled(inst, k, k);
      const auto a = build_etc(inst), b = build_etc(big);
      for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) ASSERT_EQ(a(i, j), b(i, j));
      }
      for (auto p : kAllPolicies) ASSERT_EQ(schedule(p, inst), schedule(p, big)) << to_string(p);
    }
    // Arbitrary factors agree to rounding.
    const double k = 0.37 + static_cast<double>(seed % 17);
    const auto other = support::scaled(inst, k, k);
    for (auto p : kAllPolicies) {
      const auto m1 = metrics(schedule(p, inst), inst);
      const auto m2 = metrics(schedule(p, other), other);
      ASSERT_NEAR(m1.makespan, m2.makespan, 1e-12 * m1.makespan);
      ASSERT_NEAR(m1.small_task_mean_completion, m2.small_task_mean_completion, 1e-12 * m1.makespan);
    }
  }
}

TEST(Properties, HomogeneousLengthScaling) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = support::random_instance(seed, kWide);
    for (auto p : kAllPolicies) {
      const auto d = decisions(p, inst);
      const auto base = realize(d, inst);
      for (double k : {2.0, 0.125}) {
        const auto big = support::scaled(inst, k, 1.0);
        ASSERT_EQ(decisions(p, big), d) << to_string(p);
        const auto s = realize(d, big);
        ASSERT_EQ(s.makespan, k * base.makespan);
        for (std::size_t a = 0; a < d.size(); ++a) {
          ASSERT_EQ(s.assignments[a].finish, k * base.assignments[a].finish);
          ASSERT_EQ(s.assignments[a].execution_time, k * base.assignments[a].execution_time);
        }
      }
      const double k = 3.3;
      const auto s = realize(d, support::scaled(inst, k, 1.0));
      ASSERT_NEAR(s.makespan, k * base.makespan, 1e-12 * k * base.makespan);
    }
  }
}

TEST(Properties, InputOrderInvariance) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = support::random_instance(seed, kWide, seed % 2 ? support::LengthShape::bimodal
                                                                      : support::LengthShape::uniform);
    const auto shuffled = support::permuted(inst, seed * 7 + 3);
    ASSERT_EQ(max_min(inst), max_min(shuffled));
    ASSERT_EQ(min_min(inst), min_min(shuffled));
    ASSERT_EQ(improved_max_min(inst), improved_max_min(shuffled));
    ASSERT_EQ(eq1_batches(inst).batches, eq1_batches(shuffled).batches);
  }
}

TEST(Properties, InputOrderInvarianceWithTies) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto inst = support::random_instance(seed, kWide);
    for (auto& c : inst.cloudlets) c.length = std::round(c.length / 250.0) * 250.0 + 250.0;
    for (auto& v : inst.vms) v.mips = 100.0;
    const auto shuffled = support::permuted(inst, seed + 11);
    ASSERT_EQ(max_min(inst), max_min(shuffled));
    ASSERT_EQ(min_min(inst), min_min(shuffled));
    ASSERT_EQ(improved_max_min(inst), improved_max_min(shuffled));
  }
}

TEST(Properties, EctListIsOrderSensitive) {
  Instance inst{{{0, 10}, {1, 20}, {2, 30}, {3, 40}}, {{0, 1, {}}, {1, 2, {}}}};
  Instance reversed = inst;
  std::reverse(reversed.cloudlets.begin(), reversed.cloudlets.end());
  EXPECT_NE(ect_list_decisions(inst), ect_list_decisions(reversed));
}

TEST(Properties, SelectionInvariants) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = support::random_instance(seed, kWide);
    EXPECT_EQ(support::selection_violation(inst, max_min_decisions(inst), true, {support::everything(inst)}), "")
        << "max_min " << seed;
    EXPECT_EQ(support::selection_violation(inst, min_min_decisions(inst), false, {support::everything(inst)}), "")
        << "min_min " << seed;
  }
}

TEST(Properties, BatchInvariant) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = support::random_instance(seed, kWide, support::LengthShape::bimodal);
    const auto plan = eq1_batches(inst);
    const auto d = improved_max_min_decisions(inst);

    EXPECT_EQ(support::batch_violation(plan, d), "") << seed;

    // and within each batch the Max-Min selection rule holds
    std::vector<std::set<std::size_t>> phases;
    for (const auto& b : plan.batches) {
      auto& phase = phases.emplace_back();
      for (auto id : b) phase.insert(support::position_of(inst, id));
    }
    EXPECT_EQ(support::selection_violation(inst, d, true, phases), "") << seed;
  }
}

TEST(Properties, BatchPlanShape) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = support::random_instance(seed, kWide);
    const auto plan = eq1_batches(inst);
    const auto n = inst.cloudlets.size();
    ASSERT_EQ(plan.batch_size, (n + inst.vms.size() - 1) / inst.vms.size());
    std::vector<CloudletId> flat;
    for (std::size_t b = 0; b < plan.batches.size(); ++b) {
      if (b + 1 < plan.batches.size()) ASSERT_EQ(plan.batches[b].size(), plan.batch_size);
      flat.insert(flat.end(), plan.batches[b].begin(), plan.batches[b].end());
    }
    ASSERT_EQ(flat.size(), n);
    for (std::size_t k = 1; k < flat.size(); ++k) {
      const auto& prev = inst.cloudlets[support::position_of(inst, flat[k - 1])];
      const auto& cur = inst.cloudlets[support::position_of(inst, flat[k])];
      ASSERT_TRUE(prev.length < cur.length || (prev.length == cur.length && prev.id < cur.id));
    }
  }
}

TEST(Properties, SingleMachineEquality) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = support::random_instance(seed, {1, 40, 1, 1});
    const double sum = support::sum_execution_times(inst, 0);
    for (auto p : kAllPolicies) ASSERT_NEAR(schedule(p, inst).makespan, sum, 1e-9) << to_string(p);
  }
}

TEST(Properties, RealizeIsDeterministic) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = support::random_instance(seed, kWide);
    for (auto p : kAllPolicies) ASSERT_EQ(schedule(p, inst), schedule(p, inst));
  }
}
