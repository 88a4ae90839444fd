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

#include "hufsense/recovery.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace hufsense {

CancellationError::CancellationError(Index leaf)
    : RecoveryError("noiseless descent reached coordinate " + std::to_string(leaf + 1) +
                    " through a nonzero measurement but read zero there (cancelling coordinates)"),
      leaf_(leaf) {}

MeasurementOracle::MeasurementOracle(Eigen::VectorXd signal, NoiseSpec noise, std::uint64_t seed)
    : signal_(std::move(signal)), noise_(noise), rng_(seed) {}

double MeasurementOracle::corrupt(double clean) {
  ++count_;
  return noise_.is_none() ? clean : clean + noise_.sample(rng_);
}

double MeasurementOracle::measure(const SamplingVector& a) {
  if (a.dimension() != dimension()) throw DomainError("sampling vector dimension mismatch");
  return corrupt(a.apply(signal_));
}

double MeasurementOracle::measure(const Eigen::Ref<const Eigen::VectorXd>& a) {
  if (a.size() != signal_.size()) throw DomainError("sampling vector dimension mismatch");
  return corrupt(a.dot(signal_));
}

FindOneResult find_one(const HuffmanTree& tree, MeasurementOracle& oracle, double threshold,
                       bool record_sets) {
  FindOneResult result;
  NodeId id = tree.root();
  while (!tree.node(id).is_leaf()) {
    const NodeId measured = tree.sampled_child(id);
    const SamplingVector a = sampling_vector(tree, id);
    const double y = oracle.measure(a);

    DescentStep step;
    step.node_size = static_cast<std::size_t>(tree.node(id).size());
    step.value = y;
    step.took_measured = std::abs(y) > threshold;
    if (record_sets) {
      step.node = tree.sorted_index_set(id);
      step.measured.assign(a.support().begin(), a.support().end());
    }
    result.trace.steps.push_back(std::move(step));
    id = result.trace.steps.back().took_measured ? measured : tree.other_child(id);
  }
  result.index = tree.node(id).min_index;
  result.value = oracle.measure(SamplingVector(tree.dimension(), {result.index}));
  result.trace.leaf = result.index;
  result.trace.leaf_value = result.value;
  return result;
}

RecoveryResult recover(const SupportModel& model, MeasurementOracle& oracle, int s, double threshold,
                       const RecoveryOptions& options) {
  if (model.dimension() != oracle.dimension()) {
    throw DomainError("model dimension " + std::to_string(model.dimension()) +
                      " does not match signal dimension " + std::to_string(oracle.dimension()));
  }
  if (s < 0) throw DomainError("sparsity must be nonnegative");
  if (!(threshold >= 0.0)) throw DomainError("threshold must be nonnegative");

  const std::size_t start = oracle.count();
  RecoveryResult result;
  result.estimate = Eigen::VectorXd::Zero(model.dimension());

  if (model.probability_empty() > 0.0) {
    result.prechecked = true;
    const double y = oracle.measure(SamplingVector(model.dimension(), model.active_indices()));
    if (std::abs(y) <= threshold) {
      result.terminated_on_zero = true;
      result.total_measurements = oracle.count() - start;
      return result;
    }
  }

  SupportModel current = model;
  for (int k = 1; k <= s && current.active_count() > 0; ++k) {
    const bool reuse = k == 1 && options.first_tree != nullptr;
    const HuffmanTree built = reuse ? HuffmanTree{} : build_tree(current);
    const HuffmanTree& tree = reuse ? *options.first_tree : built;

    FindOneResult found = find_one(tree, oracle, threshold, options.record_sets);
    const bool empty = std::abs(found.value) <= threshold;
    if (empty && threshold == 0.0) {
      for (const auto& step : found.trace.steps) {
        if (step.took_measured) throw CancellationError(found.index);
      }
    }
    if (options.keep_traces) result.rounds.push_back(std::move(found.trace));
    if (empty) {
      result.terminated_on_zero = true;
      break;
    }
    result.found.push_back(found.index);
    result.values.push_back(found.value);
    result.estimate(found.index) = found.value;
    if (k < s) {
      const Index t = found.index;
      try {
        current = current.condition(std::span<const Index>(&t, 1));
      } catch (const ConditioningError&) {
        throw RecoveryError("coordinate " + std::to_string(t + 1) +
                            " has zero probability of being nonzero together with those already found");
      }
    }
  }
  result.total_measurements = oracle.count() - start;
  return result;
}

namespace {

struct Walk {
  int depth = 0;
  Index leaf = 0;
};

// Noiseless descent decided by set membership alone: a measurement of chi_C is
// nonzero exactly when C meets the support.
Walk walk(const HuffmanTree& tree, std::uint64_t support) {
  Walk w;
  NodeId id = tree.root();
  while (!tree.node(id).is_leaf()) {
    const NodeId measured = tree.sampled_child(id);
    bool hit = false;
    for (Index i : tree.index_set(measured)) {
      if ((support >> i) & 1U) {
        hit = true;
        break;
      }
    }
    id = hit ? measured : tree.other_child(id);
    ++w.depth;
  }
  w.leaf = tree.node(id).min_index;
  return w;
}

}  // namespace

double exact_expected_cost(const SupportModel& model, int s, CostMode mode) {
  if (!model.is_explicit()) {
    throw UnsupportedOperation("exact expected cost requires an explicit model");
  }
  struct Plan {
    SupportModel model;
    HuffmanTree tree;
  };
  std::map<std::uint64_t, Plan> plans;
  auto plan_for = [&](std::uint64_t omega) -> const Plan& {
    auto it = plans.find(omega);
    if (it == plans.end()) {
      const IndexSet w = from_mask(omega);
      SupportModel conditioned = model.condition(w);
      HuffmanTree tree = build_tree(conditioned);
      it = plans.emplace(omega, Plan{std::move(conditioned), std::move(tree)}).first;
    }
    return it->second;
  };

  const bool precheck = model.probability_empty() > 0.0;
  double total = 0.0;
  for (const auto& row : model.table()) {
    double count = 0.0;
    if (mode == CostMode::LocateOne) {
      count = walk(plan_for(0).tree, row.mask).depth;
    } else {
      if (precheck) {
        count += 1.0;
        if (row.mask == 0) {
          total += row.probability * count;
          continue;
        }
      }
      std::uint64_t omega = 0;
      for (int k = 1; k <= s && std::popcount(omega) < model.active_count(); ++k) {
        const Walk w = walk(plan_for(omega).tree, row.mask);
        count += w.depth + 1;
        const std::uint64_t bit = std::uint64_t{1} << w.leaf;
        if ((row.mask & bit) == 0) break;
        omega |= bit;
      }
    }
    total += row.probability * count;
  }
  return total;
}

}  // namespace hufsense
