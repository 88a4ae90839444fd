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

#pragma once

#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "hufsense/model.hpp"
#include "hufsense/noise.hpp"
#include "hufsense/tree.hpp"

namespace hufsense {

/// Any failure of a recovery run that a campaign should count rather than abort on.
class RecoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A noiseless descent followed a nonzero measurement into a subtree whose
/// leaf then read exactly zero: the measured coordinates cancelled.
class CancellationError : public RecoveryError {
 public:
  explicit CancellationError(Index leaf);
  Index leaf() const noexcept { return leaf_; }

 private:
  Index leaf_;
};

/// Answers inner-product queries against a hidden signal and counts them.
class MeasurementOracle {
 public:
  explicit MeasurementOracle(Eigen::VectorXd signal, NoiseSpec noise = {}, std::uint64_t seed = 0);

  double measure(const SamplingVector& a);
  double measure(const Eigen::Ref<const Eigen::VectorXd>& a);

  std::size_t count() const noexcept { return count_; }
  Index dimension() const noexcept { return static_cast<Index>(signal_.size()); }
  const NoiseSpec& noise() const noexcept { return noise_; }

 private:
  double corrupt(double clean);

  Eigen::VectorXd signal_;
  NoiseSpec noise_;
  std::mt19937_64 rng_;
  std::size_t count_ = 0;
};

struct DescentStep {
  IndexSet node;      // empty unless sets are recorded
  IndexSet measured;  // support of the sampling vector used at `node`
  std::size_t node_size = 0;
  double value = 0.0;
  bool took_measured = false;
};

struct DescentTrace {
  std::vector<DescentStep> steps;
  Index leaf = 0;
  double leaf_value = 0.0;
};

struct FindOneResult {
  Index index = 0;
  double value = 0.0;
  DescentTrace trace;
};

/// Walks the tree from the root: a measurement whose magnitude exceeds
/// `threshold` sends the descent into the measured child, otherwise into its
/// sibling. The leaf's coordinate is then read with one more query.
FindOneResult find_one(const HuffmanTree& tree, MeasurementOracle& oracle, double threshold,
                       bool record_sets = true);

struct RecoveryOptions {
  bool keep_traces = true;
  bool record_sets = true;
  /// Prebuilt tree for the first round; must be built from the unconditioned model.
  const HuffmanTree* first_tree = nullptr;
};

struct RecoveryResult {
  Eigen::VectorXd estimate;
  std::vector<Index> found;  // discovery order
  std::vector<double> values;
  std::size_t total_measurements = 0;
  bool prechecked = false;
  bool terminated_on_zero = false;
  std::vector<DescentTrace> rounds;
};

/// Finds up to `s` nonzero coordinates one at a time, replanning the tree on
/// the remaining coordinates under the law conditioned on those found.
///
/// When the model gives the zero vector positive probability, one all-ones
/// measurement is made first. The loop stops after `s` coordinates or when the
/// read value is not above `threshold` (exactly zero in noiseless mode).
RecoveryResult recover(const SupportModel& model, MeasurementOracle& oracle, int s, double threshold,
                       const RecoveryOptions& options = {});

enum class CostMode { LocateOne, FullRecovery };

/// Exact expected number of measurements, by enumerating every support of an
/// explicit model and replaying the noiseless descent on it. LocateOne counts
/// the descent of the first round only (no pre-check, no value read);
/// FullRecovery counts every query `recover` would issue.
double exact_expected_cost(const SupportModel& model, int s, CostMode mode);

}  // namespace hufsense
