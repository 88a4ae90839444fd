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

#include "hufsense/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "hufsense/recovery.hpp"
#include "hufsense/tree.hpp"

namespace hufsense {

namespace {

Index draw_position(const SignalGenerator& gen, std::mt19937_64& rng) {
  switch (gen.positions) {
    case PositionLaw::Uniform: {
      std::uniform_int_distribution<Index> pick(0, gen.n - 1);
      return pick(rng);
    }
    case PositionLaw::Exponential: {
      std::exponential_distribution<double> expo(1.0 / gen.mean);
      for (;;) {
        const double k = std::ceil(expo(rng));
        if (k >= 1.0 && k <= static_cast<double>(gen.n)) return static_cast<Index>(k) - 1;
      }
    }
    case PositionLaw::Model:
      break;
  }
  throw UnsupportedOperation("model-driven positions are drawn as whole supports");
}

double draw_value(double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const double v = amplitude * (unit(rng) - 0.5);
    if (v != 0.0) return v;
  }
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

Eigen::VectorXd generate_signal(const SignalGenerator& gen, std::mt19937_64& rng) {
  if (gen.n < 1) throw DomainError("signal dimension must be positive");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(gen.n);
  if (gen.positions == PositionLaw::Model) {
    if (!gen.support_law) throw DomainError("model-driven generator needs a support law");
    if (gen.support_law->dimension() != gen.n) throw DomainError("support law dimension mismatch");
    for (Index i : gen.support_law->sample_support(rng)) x(i) = draw_value(gen.amplitude, rng);
    return x;
  }
  if (gen.s < 0 || gen.s > gen.n) throw DomainError("sparsity must lie in [0, n]");
  std::unordered_set<Index> used;
  while (static_cast<int>(used.size()) < gen.s) {
    const Index i = draw_position(gen, rng);
    if (!used.insert(i).second) continue;
    x(i) = draw_value(gen.amplitude, rng);
  }
  return x;
}

Eigen::VectorXd generate_signal(const SignalGenerator& gen, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return generate_signal(gen, rng);
}

SupportModel ModelSpec::instantiate(Index n, int s) const {
  if (kind == Kind::Explicit) {
    if (!explicit_model) throw DomainError("explicit model spec without a table");
    if (explicit_model->dimension() != n) throw DomainError("explicit model dimension does not match generator");
    return *explicit_model;
  }
  switch (position_pdf) {
    case PositionLaw::Uniform:
      return SupportModel::uniform_positions(n, s);
    case PositionLaw::Exponential:
      return SupportModel::exponential_positions(n, s, mean);
    case PositionLaw::Model:
      break;
  }
  throw DomainError("marginal model needs a uniform or exponential position pdf");
}

SweepPoint resolve_point(const CampaignConfig& config, double value) {
  SweepPoint p;
  p.value = value;
  p.generator = config.generator;
  p.noise = config.noise;
  switch (config.sweep) {
    case SweepVariable::Sparsity:
      p.generator.s = static_cast<int>(std::lround(value));
      break;
    case SweepVariable::NoiseAmplitude:
      p.noise = config.noise.kind == NoiseKind::Gaussian ? NoiseSpec::gaussian(value) : NoiseSpec::uniform(value);
      break;
    case SweepVariable::LogDimension:
      p.generator.n = Index{1} << static_cast<int>(std::lround(value));
      break;
    case SweepVariable::None:
      break;
  }
  p.threshold = config.threshold.value_or(threshold_for(p.noise));
  p.sparsity = p.generator.positions == PositionLaw::Model && p.generator.support_law
                   ? p.generator.support_law->max_sparsity()
                   : p.generator.s;
  return p;
}

namespace {

TrialOutcome run_trial_with(const SweepPoint& point, const SupportModel& model, const HuffmanTree* first_tree,
                            std::uint64_t seed, std::size_t point_index, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(point_index), static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(trial) >> 32)};
  std::mt19937_64 rng(seq);
  const Eigen::VectorXd x = generate_signal(point.generator, rng);
  MeasurementOracle oracle(x, point.noise, rng());

  RecoveryOptions options;
  options.keep_traces = false;
  options.record_sets = false;
  options.first_tree = first_tree;

  TrialOutcome out;
  try {
    const RecoveryResult r = recover(model, oracle, point.sparsity, point.threshold, options);
    out.measurements = r.total_measurements;
    out.rel_err_pct = relative_error_pct(r.estimate, x);
    IndexSet truth;
    for (Index i = 0; i < x.size(); ++i) {
      if (x(i) != 0.0) truth.push_back(i);
    }
    IndexSet found(r.found.begin(), r.found.end());
    std::sort(found.begin(), found.end());
    out.exact_support = found == truth;
  } catch (const RecoveryError&) {
    out.failed = true;
    out.measurements = oracle.count();
  }
  return out;
}

}  // namespace

TrialOutcome run_trial(const SweepPoint& point, const SupportModel& model, std::uint64_t seed,
                       std::size_t point_index, std::size_t trial) {
  return run_trial_with(point, model, nullptr, seed, point_index, trial);
}

CampaignReport run_campaign(const CampaignConfig& config) {
  if (config.trials < 1) throw DomainError("campaign needs at least one trial");
  std::vector<double> values = config.values;
  if (config.sweep == SweepVariable::None) values = {0.0};
  if (values.empty()) throw DomainError("sweep values must be nonempty");

  CampaignReport report;
  report.config = config;
  const unsigned workers =
      config.workers != 0 ? config.workers : std::max(1U, std::thread::hardware_concurrency());

  for (std::size_t pi = 0; pi < values.size(); ++pi) {
    const auto start = std::chrono::steady_clock::now();
    const SweepPoint point = resolve_point(config, values[pi]);
    const SupportModel model = config.model.instantiate(point.generator.n, point.sparsity);
    const HuffmanTree first_tree = build_tree(model);

    std::vector<TrialOutcome> outcomes(config.trials);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t t = next++; t < config.trials; t = next++) {
        outcomes[t] = run_trial_with(point, model, &first_tree, config.seed, pi, t);
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    PointStats stats;
    stats.sweep_value = values[pi];
    stats.trials = config.trials;
    stats.threshold = point.threshold;
    std::vector<double> counts;
    std::vector<double> errors;
    std::size_t successes = 0;
    for (const auto& o : outcomes) {
      if (o.failed) {
        ++stats.failures;
        continue;
      }
      counts.push_back(static_cast<double>(o.measurements));
      errors.push_back(o.rel_err_pct);
      if (o.exact_support) ++successes;
    }
    if (!counts.empty()) {
      const Eigen::Map<const Eigen::VectorXd> c(counts.data(), static_cast<Eigen::Index>(counts.size()));
      const Eigen::Map<const Eigen::VectorXd> e(errors.data(), static_cast<Eigen::Index>(errors.size()));
      stats.mean_count = c.mean();
      stats.var_count = counts.size() > 1
                            ? (c.array() - stats.mean_count).square().sum() / static_cast<double>(counts.size() - 1)
                            : 0.0;
      stats.mean_rel_err_pct = e.mean();
      stats.median_rel_err_pct = median_of(errors);
    }
    stats.success_rate = static_cast<double>(successes) / static_cast<double>(config.trials);
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.points.push_back(stats);
  }
  return report;
}

void write_csv(const CampaignReport& report, std::ostream& out) {
  out << "sweep_value,mean_count,var_count,mean_rel_err_pct,median_rel_err_pct,success_rate,seconds\n";
  out << std::setprecision(10);
  for (const auto& p : report.points) {
    out << p.sweep_value << ',' << p.mean_count << ',' << p.var_count << ',' << p.mean_rel_err_pct << ','
        << p.median_rel_err_pct << ',' << p.success_rate << ',' << p.seconds << '\n';
  }
}

TrendFit fit_trend(const std::vector<double>& x, const std::vector<double>& y) {
  const Eigen::Map<const Eigen::VectorXd> xm(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
  return fit_trend(xm, ym);
}

std::vector<BenchRow> benchmark(Index n, const std::vector<int>& sparsities, std::size_t runs,
                                std::uint64_t seed) {
  std::vector<BenchRow> rows;
  for (int s : sparsities) {
    const SupportModel model = SupportModel::uniform_positions(n, s);
    SignalGenerator gen;
    gen.n = n;
    gen.s = s;
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(s));
    std::vector<Eigen::VectorXd> signals;
    for (std::size_t r = 0; r < runs; ++r) signals.push_back(generate_signal(gen, rng));

    RecoveryOptions options;
    options.keep_traces = false;
    options.record_sets = false;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& x : signals) {
      MeasurementOracle oracle(x);
      recover(model, oracle, s, 0.0, options);
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({s, runs, elapsed / static_cast<double>(std::max<std::size_t>(runs, 1))});
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "s,runs,seconds_per_recovery\n" << std::setprecision(6);
  for (const auto& r : rows) out << r.sparsity << ',' << r.runs << ',' << r.seconds_per_recovery << '\n';
}

}  // namespace hufsense
