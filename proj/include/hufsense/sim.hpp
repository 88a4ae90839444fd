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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "hufsense/model.hpp"
#include "hufsense/noise.hpp"

namespace hufsense {

enum class PositionLaw { Uniform, Exponential, Model };

/// Draws s-sparse test signals: s distinct positions from the position law,
/// values amplitude * (U(0,1) - 0.5). With PositionLaw::Model the support is
/// drawn from an explicit model instead and `s` is ignored.
struct SignalGenerator {
  Index n = 1;
  int s = 1;
  double amplitude = 1.0;
  PositionLaw positions = PositionLaw::Uniform;
  double mean = 10.0;
  std::optional<SupportModel> support_law;
};

Eigen::VectorXd generate_signal(const SignalGenerator& gen, std::mt19937_64& rng);
Eigen::VectorXd generate_signal(const SignalGenerator& gen, std::uint64_t seed);

/// How the planning model is derived at each sweep point.
struct ModelSpec {
  enum class Kind { Explicit, Marginal };
  Kind kind = Kind::Marginal;
  std::optional<SupportModel> explicit_model;
  PositionLaw position_pdf = PositionLaw::Uniform;
  double mean = 10.0;

  SupportModel instantiate(Index n, int s) const;
};

enum class SweepVariable { None, Sparsity, NoiseAmplitude, LogDimension };

struct CampaignConfig {
  std::string name;
  ModelSpec model;
  SignalGenerator generator;
  NoiseSpec noise;
  std::optional<double> threshold;  // default: threshold_for(noise)
  std::size_t trials = 1000;
  SweepVariable sweep = SweepVariable::None;
  std::vector<double> values;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// Per-sweep-point generator, noise, and sparsity after applying the sweep value.
struct SweepPoint {
  double value = 0.0;
  SignalGenerator generator;
  NoiseSpec noise;
  double threshold = 0.0;
  int sparsity = 0;
};

SweepPoint resolve_point(const CampaignConfig& config, double value);

struct PointStats {
  double sweep_value = 0.0;
  std::size_t trials = 0;
  double mean_count = 0.0;
  double var_count = 0.0;
  double mean_rel_err_pct = 0.0;
  double median_rel_err_pct = 0.0;
  double success_rate = 0.0;
  double seconds = 0.0;
  std::size_t failures = 0;  // trials that raised a recovery error
  double threshold = 0.0;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<PointStats> points;
};

struct TrialOutcome {
  std::size_t measurements = 0;
  double rel_err_pct = 0.0;
  bool exact_support = false;
  bool failed = false;
};

/// One seeded trial; the stream depends only on (seed, point, trial).
TrialOutcome run_trial(const SweepPoint& point, const SupportModel& model, std::uint64_t seed,
                       std::size_t point_index, std::size_t trial);

CampaignReport run_campaign(const CampaignConfig& config);

void write_csv(const CampaignReport& report, std::ostream& out);

/// 100 * ||estimate - truth|| / ||truth||; zero when both vanish.
template <typename A, typename B>
double relative_error_pct(const Eigen::MatrixBase<A>& estimate, const Eigen::MatrixBase<B>& truth) {
  const double norm = truth.norm();
  const double diff = (estimate - truth).norm();
  if (norm == 0.0) return diff == 0.0 ? 0.0 : 100.0;
  return 100.0 * diff / norm;
}

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (x, y).
template <typename DX, typename DY>
TrendFit fit_trend(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  if (x.size() != y.size()) throw DomainError("trend series lengths differ");
  if (x.size() < 3) throw DomainError("trend fit needs at least three points");
  const Eigen::Index m = x.size();
  Eigen::MatrixXd design(m, 2);
  design.col(0) = x.template cast<double>();
  design.col(1).setOnes();
  const Eigen::VectorXd yy = y.template cast<double>();
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(yy);
  const double ss_res = (design * beta - yy).squaredNorm();
  const double ss_tot = (yy.array() - yy.mean()).matrix().squaredNorm();
  TrendFit fit;
  fit.slope = beta(0);
  fit.intercept = beta(1);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

TrendFit fit_trend(const std::vector<double>& x, const std::vector<double>& y);

struct BenchRow {
  int sparsity = 0;
  std::size_t runs = 0;
  double seconds_per_recovery = 0.0;
};

/// Wall-clock per noiseless recovery on the uniform model, one row per sparsity.
std::vector<BenchRow> benchmark(Index n, const std::vector<int>& sparsities, std::size_t runs,
                                std::uint64_t seed);
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace hufsense
