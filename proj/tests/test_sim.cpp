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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "hufsense/recovery.hpp"
#include "hufsense/sim.hpp"
#include "oracles.hpp"

using namespace hufsense;

namespace {

CampaignConfig uniform_campaign(Index n, std::vector<double> sparsities, std::size_t trials) {
  CampaignConfig c;
  c.generator = {n, 1, 1.0, PositionLaw::Uniform, 10.0, std::nullopt};
  c.model.position_pdf = PositionLaw::Uniform;
  c.sweep = SweepVariable::Sparsity;
  c.values = std::move(sparsities);
  c.trials = trials;
  c.seed = 99;
  return c;
}

}  // namespace

TEST(Signals, ZeroSparsityIsTheZeroVector) {
  SignalGenerator g{16, 0, 1.0, PositionLaw::Uniform, 10.0, std::nullopt};
  EXPECT_TRUE(generate_signal(g, 1).isZero(0.0));
}

TEST(Signals, FullSupportWhenSparsityEqualsDimension) {
  SignalGenerator g{4, 4, 3.0, PositionLaw::Uniform, 10.0, std::nullopt};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::VectorXd x = generate_signal(g, seed);
    for (Index i = 0; i < 4; ++i) {
      EXPECT_NE(x(i), 0.0);
      EXPECT_LE(std::abs(x(i)), 1.5);
    }
  }
  g.s = 5;
  EXPECT_THROW(generate_signal(g, 1), DomainError);
}

TEST(Signals, ExponentialPositionsMatchDiscretizedMean) {
  SignalGenerator g{32768, 3, 1.0, PositionLaw::Exponential, 10.0, std::nullopt};
  std::mt19937_64 rng(2);
  double sum = 0.0;
  std::size_t count = 0;
  for (int k = 0; k < 20000; ++k) {
    const Eigen::VectorXd x = generate_signal(g, rng);
    std::set<Index> idx;
    for (Index i = 0; i < x.size(); ++i) {
      if (x(i) != 0.0) idx.insert(i);
    }
    ASSERT_EQ(idx.size(), 3U);
    for (Index i : idx) sum += i + 1;
    count += idx.size();
  }
  // Three distinct draws per signal: rejecting duplicates pushes later picks
  // outward, so compare the single-draw case separately.
  EXPECT_GT(sum / count, 10.0);

  SignalGenerator one{32768, 1, 1.0, PositionLaw::Exponential, 10.0, std::nullopt};
  double s1 = 0.0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const Eigen::VectorXd x = generate_signal(one, rng);
    for (Index i = 0; i < x.size(); ++i) {
      if (x(i) != 0.0) s1 += i + 1;
    }
  }
  const double exact = oracle::ceil_exponential_mean(10.0, 32768);
  EXPECT_NEAR(exact, 1.0 / (1.0 - std::exp(-0.1)), 1e-9);
  // sd of ceil(Exp(10)) is about 10; 5 standard errors.
  EXPECT_NEAR(s1 / draws, exact, 5 * 10.0 / std::sqrt(draws));
}

TEST(Trend, ExactLineAndConstant) {
  const TrendFit line = fit_trend(std::vector<double>{1, 2, 3, 4}, std::vector<double>{3, 5, 7, 9});
  EXPECT_NEAR(line.slope, 2.0, 1e-12);
  EXPECT_NEAR(line.intercept, 1.0, 1e-12);
  EXPECT_NEAR(line.r_squared, 1.0, 1e-12);
  const TrendFit flat = fit_trend(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4});
  EXPECT_NEAR(flat.slope, 0.0, 1e-12);
  EXPECT_THROW(fit_trend(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DomainError);
}

TEST(Trend, NoisyLineHasPartialFit) {
  const TrendFit f = fit_trend(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{1, 3, 2, 5, 4});
  EXPECT_NEAR(f.slope, 0.8, 1e-12);
  EXPECT_NEAR(f.r_squared, 0.64, 1e-12);
}

TEST(Campaign, DeterministicAcrossWorkerCounts) {
  CampaignConfig c = uniform_campaign(256, {2, 6}, 200);
  c.noise = NoiseSpec::uniform(0.1);
  c.generator.amplitude = 20.0;
  c.workers = 1;
  const CampaignReport a = run_campaign(c);
  c.workers = 3;
  const CampaignReport b = run_campaign(c);
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    EXPECT_EQ(a.points[k].mean_count, b.points[k].mean_count);
    EXPECT_EQ(a.points[k].var_count, b.points[k].var_count);
    EXPECT_EQ(a.points[k].mean_rel_err_pct, b.points[k].mean_rel_err_pct);
    EXPECT_EQ(a.points[k].success_rate, b.points[k].success_rate);
  }
}

TEST(Campaign, NoiselessIsExact) {
  const CampaignReport r = run_campaign(uniform_campaign(256, {1, 8, 20}, 200));
  for (const auto& p : r.points) {
    EXPECT_EQ(p.success_rate, 1.0);
    EXPECT_EQ(p.mean_rel_err_pct, 0.0);
    EXPECT_EQ(p.failures, 0U);
  }
}

TEST(Campaign, UniformOneSparseCountIsFixed) {
  // The marginal law gives the zero vector mass (1 - 1/n)^n, so every run is
  // pre-check + r descent queries + value read.
  for (int r : {4, 8, 10}) {
    const Index n = Index{1} << r;
    const CampaignReport rep = run_campaign(uniform_campaign(n, {1}, 100));
    EXPECT_EQ(rep.points[0].mean_count, r + 2.0);
    EXPECT_EQ(rep.points[0].var_count, 0.0);
  }
}

TEST(Campaign, CsvFormat) {
  const CampaignReport r = run_campaign(uniform_campaign(64, {1, 2}, 10));
  std::ostringstream out;
  write_csv(r, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "sweep_value,mean_count,var_count,mean_rel_err_pct,median_rel_err_pct,success_rate,seconds");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
  }
  EXPECT_EQ(rows, 2);
}

TEST(Campaign, RejectsEmptySweep) {
  CampaignConfig c = uniform_campaign(64, {}, 10);
  EXPECT_THROW(run_campaign(c), DomainError);
  c.values = {1};
  c.trials = 0;
  EXPECT_THROW(run_campaign(c), DomainError);
}

TEST(Campaign, NoiseSweepResolvesThresholdPerPoint) {
  CampaignConfig c = uniform_campaign(64, {0.1, 0.2}, 1);
  c.sweep = SweepVariable::NoiseAmplitude;
  c.noise = NoiseSpec::uniform(0.1);
  EXPECT_NEAR(resolve_point(c, 0.2).threshold, 0.1, 1e-15);
  c.threshold = 0.3;
  EXPECT_EQ(resolve_point(c, 0.2).threshold, 0.3);
}

TEST(Bench, ReportsPositiveTimings) {
  const auto rows = benchmark(1024, {1, 150}, 5, 1);
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_GT(rows[0].seconds_per_recovery, 0.0);
  std::ostringstream out;
  write_bench_csv(rows, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "s,runs,seconds_per_recovery");
}
