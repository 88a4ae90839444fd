// Copyright 2026 The hufsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "hufsense/recovery.hpp"
#include "hufsense/sim.hpp"
#include "hufsense/validate.hpp"
#include "oracles.hpp"

using namespace hufsense;

namespace {

SupportModel small_law_model() { return SupportModel::explicit_law(4, 2, oracle::small_law()); }

SupportModel uniform_singletons(Index n) {
  std::vector<SupportEntry> rows;
  for (Index i = 0; i < n; ++i) rows.push_back({{i}, 1.0 / n});
  return SupportModel::explicit_law(n, 1, rows);
}

Eigen::VectorXd unit(Index n, Index i, double v = 1.0) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  x(i) = v;
  return x;
}

// Reference noiseless walk: a measurement of chi_C is nonzero iff C meets the
// support, so the path is fixed by the support alone.
std::pair<Index, int> reference_walk(const HuffmanTree& t, const IndexSet& support) {
  NodeId id = t.root();
  int depth = 0;
  while (!t.node(id).is_leaf()) {
    const TreeNode& node = t.node(id);
    const NodeId measured = node.sampled == Side::Left ? node.left : node.right;
    const NodeId other = node.sampled == Side::Left ? node.right : node.left;
    id = oracle::intersects(t.sorted_index_set(measured), support) ? measured : other;
    ++depth;
  }
  return {t.sorted_index_set(id).front(), depth};
}

}  // namespace

TEST(FindOne, TwoLeafForcedCase) {
  const SupportModel m = SupportModel::independent({0.5, 0.5}, 1);
  const HuffmanTree t = build_tree(m);
  MeasurementOracle o(Eigen::Vector2d(0.0, 3.5));
  const FindOneResult r = find_one(t, o, 0.0);
  EXPECT_EQ(r.index, 1);
  EXPECT_EQ(r.value, 3.5);
  EXPECT_EQ(o.count(), 2U);
  ASSERT_EQ(r.trace.steps.size(), 1U);
  EXPECT_FALSE(r.trace.steps[0].took_measured);
}

TEST(FindOne, SmallLawUnitVector) {
  const HuffmanTree t = build_tree(small_law_model());
  MeasurementOracle o(unit(4, 0));
  const FindOneResult r = find_one(t, o, 0.0);
  EXPECT_EQ(r.index, 0);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(o.count(), 2U);
}

TEST(FindOne, SmallLawTwoNonzeros) {
  const HuffmanTree t = build_tree(small_law_model());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  x(1) = 5.0;
  x(2) = -2.0;
  MeasurementOracle o(x);
  const FindOneResult r = find_one(t, o, 0.0);
  const auto [leaf, depth] = reference_walk(t, {1, 2});
  EXPECT_EQ(r.index, leaf);
  EXPECT_EQ(r.value, x(leaf));
  EXPECT_EQ(o.count(), static_cast<std::size_t>(depth + 1));
  // Trace: parent-to-child, ending at the leaf.
  ASSERT_EQ(r.trace.steps.size(), static_cast<std::size_t>(depth));
  EXPECT_EQ(r.trace.steps[0].node, (IndexSet{0, 1, 2, 3}));
  EXPECT_EQ(r.trace.steps[1].node, (IndexSet{1, 2, 3}));
}

TEST(FindOne, MeasuredRightChildOnNonzeroDescendsRight) {
  // Conditioned small law: node {2,3,4} measures its right child {3,4}.
  const SupportModel c = small_law_model().condition(IndexSet{0});
  const HuffmanTree t = build_tree(c);
  ASSERT_EQ(t.node(t.root()).sampled, Side::Right);
  MeasurementOracle o(unit(4, 3, -4.0));
  const FindOneResult r = find_one(t, o, 0.0);
  EXPECT_EQ(r.index, 3);
  EXPECT_TRUE(r.trace.steps[0].took_measured);
}

TEST(Recover, ZeroSignalStopsAfterPrecheck) {
  MeasurementOracle o(Eigen::VectorXd::Zero(4));
  const RecoveryResult r = recover(small_law_model(), o, 2, 0.0);
  EXPECT_TRUE(r.found.empty());
  EXPECT_EQ(r.total_measurements, 1U);
  EXPECT_TRUE(r.prechecked);
  EXPECT_TRUE(r.terminated_on_zero);
}

TEST(Recover, SmallLawUnitVectorAccounting) {
  MeasurementOracle o(unit(4, 0));
  const RecoveryResult r = recover(small_law_model(), o, 2, 0.0);
  ASSERT_EQ(r.found, (std::vector<Index>{0}));
  EXPECT_EQ(r.estimate, unit(4, 0));
  // Pre-check, then descent + value read, then a termination round whose
  // descent on {2,3,4} is one deep (it measures {3,4}, reads zero, goes to {2}).
  ASSERT_EQ(r.rounds.size(), 2U);
  EXPECT_EQ(r.rounds[0].steps.size(), 1U);
  EXPECT_EQ(r.rounds[1].steps.size(), 1U);
  EXPECT_EQ(r.total_measurements, 5U);
  EXPECT_EQ(r.total_measurements, o.count());
}

TEST(Recover, UniformSingletonsFindScaledUnitVector) {
  MeasurementOracle o(unit(4, 2, 7.0));
  const RecoveryResult r = recover(uniform_singletons(4), o, 1, 0.0);
  EXPECT_EQ(r.found, (std::vector<Index>{2}));
  EXPECT_EQ(r.estimate(2), 7.0);
  EXPECT_FALSE(r.prechecked);
  EXPECT_EQ(r.total_measurements, 3U);
}

TEST(Recover, DimensionMismatchRejected) {
  MeasurementOracle o(Eigen::VectorXd::Zero(5));
  EXPECT_THROW(recover(small_law_model(), o, 2, 0.0), DomainError);
}

TEST(Recover, NoiselessRoundTripLarge) {
  const Index n = 1024;
  const int s = 50;
  const SupportModel m = SupportModel::uniform_positions(n, s);
  SignalGenerator gen{n, s, 1.0, PositionLaw::Uniform, 10.0, std::nullopt};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Eigen::VectorXd x = generate_signal(gen, seed);
    MeasurementOracle o(x);
    const RecoveryResult r = recover(m, o, s, 0.0, {false, false, nullptr});
    EXPECT_EQ(r.estimate, x);
    EXPECT_LE(r.total_measurements, 600U);
    // Round k plans over n - k + 1 coordinates, so its leaves sit at least
    // floor(log2(n - k + 1)) deep.
    std::size_t floor_count = 1;
    for (int k = 0; k < s; ++k) floor_count += static_cast<std::size_t>(std::floor(std::log2(n - k))) + 1;
    EXPECT_GE(r.total_measurements, floor_count);
  }
}

TEST(Recover, NoiselessRoundTripOnRandomLaws) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 15);
    const SupportModel m = random_explicit_model(rng, n, 1 + static_cast<int>(rng() % 3), rng() % 2 == 0);
    const IndexSet support = m.sample_support(rng);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Index i : support) x(i) = value(rng) + 2.0;  // same sign: no cancellations
    MeasurementOracle o(x);
    const RecoveryResult r = recover(m, o, m.max_sparsity(), 0.0);
    EXPECT_EQ(r.estimate, x);
    EXPECT_EQ(r.total_measurements, o.count());
    std::size_t expected = r.prechecked ? 1 : 0;
    for (const auto& round : r.rounds) expected += round.steps.size() + 1;
    EXPECT_EQ(r.total_measurements, expected);
  }
}

TEST(Recover, NonzeroBranchKeepsALiveSubtree) {
  // Once a descent enters a child on a nonzero measurement it can only end on
  // a nonzero leaf, even with cancelling values.
  const HuffmanTree t = build_tree(uniform_singletons(8));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> v(-2, 2);
  for (int trial = 0; trial < 2000; ++trial) {
    Eigen::VectorXd x(8);
    for (Index i = 0; i < 8; ++i) x(i) = v(rng);
    MeasurementOracle o(x);
    const FindOneResult r = find_one(t, o, 0.0);
    bool entered = false;
    for (const auto& step : r.trace.steps) entered = entered || step.took_measured;
    if (entered) EXPECT_NE(r.value, 0.0);
  }
}

TEST(Recover, CancellingSupportStopsEarlyWithoutError) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  x(1) = 1.0;
  x(2) = -1.0;
  MeasurementOracle o(x);
  const RecoveryResult r = recover(small_law_model(), o, 2, 0.0);
  EXPECT_TRUE(r.found.empty());
  EXPECT_EQ(r.total_measurements, 1U);
}

TEST(Recover, AdaptivityDifferentSupportsUseDifferentVectors) {
  const SupportModel m = small_law_model();
  auto used = [&](const Eigen::VectorXd& x) {
    MeasurementOracle o(x);
    const RecoveryResult r = recover(m, o, 2, 0.0);
    std::multiset<IndexSet> vectors;
    for (const auto& round : r.rounds) {
      for (const auto& step : round.steps) vectors.insert(step.measured);
    }
    return vectors;
  };
  EXPECT_NE(used(unit(4, 0)), used(unit(4, 3)));
}

TEST(ExactCost, UniformSingletons) {
  EXPECT_NEAR(exact_expected_cost(uniform_singletons(4), 1, CostMode::LocateOne), 2.0, 1e-12);
  EXPECT_NEAR(exact_expected_cost(uniform_singletons(8), 1, CostMode::LocateOne), 3.0, 1e-12);
  EXPECT_NEAR(exact_expected_cost(uniform_singletons(8), 1, CostMode::FullRecovery), 4.0, 1e-12);
}

TEST(ExactCost, SmallLawRegression) {
  const SupportModel m = small_law_model();
  // Replay by hand through the reference walker.
  const HuffmanTree t = build_tree(m);
  double locate = 0.0;
  for (const auto& row : m.enumerate_supports()) locate += row.probability * reference_walk(t, row.support).second;
  EXPECT_NEAR(exact_expected_cost(m, 2, CostMode::LocateOne), locate, 1e-12);
  EXPECT_NEAR(exact_expected_cost(m, 2, CostMode::LocateOne), 1.55, 1e-12);
  EXPECT_NEAR(exact_expected_cost(m, 2, CostMode::FullRecovery), 5.85, 1e-12);
}

TEST(ExactCost, MarginalModelUnsupported) {
  EXPECT_THROW(exact_expected_cost(SupportModel::uniform_positions(8, 1), 1, CostMode::LocateOne),
               UnsupportedOperation);
}

TEST(ExactCost, OneSparseMatchesHuffmanCodeLength) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 7);
    const SupportModel m = random_one_sparse_model(rng, n);
    std::vector<double> w;
    for (const auto& row : m.enumerate_supports()) w.push_back(row.probability);
    EXPECT_NEAR(exact_expected_cost(m, 1, CostMode::LocateOne), oracle::huffman_length(w), 1e-9);
  }
}
