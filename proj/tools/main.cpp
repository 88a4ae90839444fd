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

// hufsense command-line frontend.
//
//   hufsense tree     --model M.json [--indices 1,2,3] [--out F]
//   hufsense recover  --model M.json --signal X.json [--noise uniform:0.1] [--threshold T] [--seed S]
//   hufsense simulate --config C.json [--seed S] [--trials K] [--noise ...] [--threshold T] [--out F.csv]
//   hufsense predict  --sigma-noise E --sigma-signal X [--s S] [--n N]
//   hufsense validate [--models 500] [--max-n 12] [--seed S]
//   hufsense bench    [--n 1024] [--s 1,25,50] [--runs 100] [--out F.csv]
//
// Machine-readable output goes to stdout (or --out); diagnostics and the
// resolved configuration echo go to stderr.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hufsense/io.hpp"
#include "hufsense/model.hpp"
#include "hufsense/noise.hpp"
#include "hufsense/recovery.hpp"
#include "hufsense/sim.hpp"
#include "hufsense/tree.hpp"
#include "hufsense/validate.hpp"

namespace {

using namespace hufsense;

NoiseSpec parse_noise(const std::string& text) {
  if (text == "none") return NoiseSpec::none();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw FormatError("--noise: expected none, uniform:N or gaussian:SIGMA");
  const std::string kind = text.substr(0, colon);
  double value = 0.0;
  try {
    value = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw FormatError("--noise: cannot parse amplitude '" + text.substr(colon + 1) + "'");
  }
  if (kind == "uniform") return NoiseSpec::uniform(value);
  if (kind == "gaussian") return NoiseSpec::gaussian(value);
  throw FormatError("--noise: unknown noise kind '" + kind + "'");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw FormatError(path + ": cannot open for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct Common {
  std::string out;
  std::optional<std::uint64_t> seed;
  int verbosity = 0;
};

int cmd_tree(const std::string& model_path, const std::string& indices, const Common& common) {
  const SupportModel model = model_from_json(read_json_file(model_path));
  IndexSet chosen;
  if (indices.empty()) {
    chosen = model.active_indices();
  } else {
    std::stringstream ss(indices);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        chosen.push_back(static_cast<Index>(std::stol(tok)) - 1);
      } catch (const std::exception&) {
        throw FormatError("--indices: cannot parse '" + tok + "'");
      }
    }
  }
  const HuffmanTree tree = build_tree(model, chosen);
  Output out(common.out);
  out.stream() << tree_to_json(tree).dump(2) << '\n';
  return 0;
}

int cmd_recover(const std::string& model_path, const std::string& signal_path, const std::string& noise_text,
                std::optional<double> threshold, std::optional<int> sparsity, bool traces, const Common& common) {
  const SupportModel model = model_from_json(read_json_file(model_path));
  const Eigen::VectorXd x = signal_from_json(read_json_file(signal_path));
  const NoiseSpec noise = parse_noise(noise_text);
  const double t = threshold.value_or(threshold_for(noise));
  const std::uint64_t seed = common.seed.value_or(1);
  const int s = sparsity.value_or(model.max_sparsity());

  MeasurementOracle oracle(x, noise, seed);
  const RecoveryResult result = recover(model, oracle, s, t);
  Json doc = recovery_to_json(result, traces);
  doc["threshold"] = t;
  doc["noise"] = noise_to_json(noise);
  doc["seed"] = seed;
  doc["sparsity"] = s;
  if (common.verbosity > 0) std::cerr << "recover: seed " << seed << ", threshold " << t << '\n';
  Output out(common.out);
  out.stream() << doc.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const std::string& config_path, std::optional<std::size_t> trials, const std::string& noise_text,
                 std::optional<double> threshold, const std::string& json_path, const Common& common) {
  CampaignConfig config = campaign_from_json(read_json_file(config_path));
  if (common.seed) config.seed = *common.seed;
  if (trials) config.trials = *trials;
  if (!noise_text.empty()) config.noise = parse_noise(noise_text);
  if (threshold) config.threshold = *threshold;

  std::cerr << "config: " << campaign_to_json(config).dump() << '\n';
  std::cerr << "seed: " << config.seed << '\n';
  const CampaignReport report = run_campaign(config);
  for (const auto& p : report.points) {
    if (p.failures > 0) std::cerr << "sweep " << p.sweep_value << ": " << p.failures << " failed trials\n";
  }
  Output out(common.out);
  write_csv(report, out.stream());
  if (!json_path.empty()) {
    Output mirror(json_path);
    mirror.stream() << report_to_json(report).dump(2) << '\n';
  }
  return 0;
}

int cmd_predict(double sigma_noise, double sigma_signal, int s, Index n, const Common& common) {
  const ErrorPrediction p = predict_errors(sigma_noise, sigma_signal, s, n);
  Json doc = {{"sigma_noise", sigma_noise}, {"sigma_signal", sigma_signal}, {"s", s}, {"n", n},
              {"t", p.t}, {"p_single", p.p_single}, {"p_recovery", p.p_recovery},
              {"p_recovery_linearized", p.p_recovery_linearized},
              {"threshold", threshold_for(NoiseSpec::gaussian(sigma_noise))}};
  Output out(common.out);
  out.stream() << doc.dump(2) << '\n';
  return 0;
}

int cmd_validate(std::size_t models, Index max_n, const Common& common) {
  SuiteOptions options;
  options.models = models;
  options.max_n = max_n;
  options.seed = common.seed.value_or(1);
  std::cerr << "seed: " << options.seed << '\n';
  bool ok = true;
  Output out(common.out);
  for (const auto& check : run_invariant_suite(options)) {
    out.stream() << (check.passed() ? "PASS " : "FAIL ") << check.name << " (" << check.cases << " cases";
    if (!check.passed()) out.stream() << ", " << check.violations << " violations, first: " << check.first_violation;
    out.stream() << ")\n";
    ok = ok && check.passed();
  }
  return ok ? 0 : 1;
}

int cmd_bench(Index n, const std::vector<int>& sparsities, std::size_t runs, const Common& common) {
  const std::uint64_t seed = common.seed.value_or(1);
  std::cerr << "seed: " << seed << '\n';
  Output out(common.out);
  write_bench_csv(benchmark(n, sparsities, runs, seed), out.stream());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive compressed sampling of sparse vectors with Huffman-planned binary measurements"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Output file (default: stdout)");
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_flag("-v,--verbose", common.verbosity, "More diagnostics on stderr");
  };

  std::string model_path, signal_path, config_path, indices, noise_text = "none", json_path;
  std::optional<double> threshold;
  std::optional<int> sparsity;
  std::optional<std::size_t> trials;
  bool traces = false;

  auto* tree = app.add_subcommand("tree", "Build and dump the planning tree of a model");
  tree->add_option("--model,--config", model_path, "Model file")->required();
  tree->add_option("--indices", indices, "Comma-separated one-based indices (default: all)");
  add_common(tree);

  auto* rec = app.add_subcommand("recover", "Recover a signal through the measurement oracle");
  rec->add_option("--model,--config", model_path, "Model file")->required();
  rec->add_option("--signal", signal_path, "Signal file")->required();
  rec->add_option("--noise", noise_text, "none | uniform:N | gaussian:SIGMA");
  rec->add_option("--threshold", threshold, "Branch threshold (default: N/2 for uniform noise, E|eta| for Gaussian)");
  rec->add_option("--sparsity", sparsity, "Maximum number of rounds (default: model sparsity)");
  rec->add_flag("--traces", traces, "Include per-round descent traces");
  add_common(rec);

  auto* sim = app.add_subcommand("simulate", "Run a Monte-Carlo campaign and write a CSV report");
  sim->add_option("--config", config_path, "Campaign file")->required();
  sim->add_option("--trials", trials, "Override trials per sweep point");
  sim->add_option("--noise", noise_text, "Override noise: none | uniform:N | gaussian:SIGMA");
  sim->add_option("--threshold", threshold, "Override branch threshold");
  sim->add_option("--json", json_path, "Also write the structured report here");
  add_common(sim);

  double sigma_noise = 0.0, sigma_signal = 1.0;
  int pred_s = 1;
  Index pred_n = 2;
  auto* pred = app.add_subcommand("predict", "Analytic single-measurement and recovery error predictions");
  pred->add_option("--sigma-noise", sigma_noise, "Noise standard deviation")->required();
  pred->add_option("--sigma-signal", sigma_signal, "Signal standard deviation");
  pred->add_option("--s", pred_s, "Sparsity");
  pred->add_option("--n", pred_n, "Dimension");
  add_common(pred);

  std::size_t models = 500;
  Index max_n = 12;
  auto* val = app.add_subcommand("validate", "Run the invariant suite on random explicit models");
  val->add_option("--models", models, "Number of random models");
  val->add_option("--max-n", max_n, "Largest dimension");
  add_common(val);

  Index bench_n = 1024;
  std::vector<int> bench_s{1, 25, 50, 75, 100, 125, 150};
  std::size_t runs = 100;
  auto* bench = app.add_subcommand("bench", "Time noiseless recoveries on the uniform model");
  bench->add_option("--n", bench_n, "Dimension");
  bench->add_option("--s", bench_s, "Sparsities")->delimiter(',');
  bench->add_option("--runs", runs, "Recoveries per sparsity");
  add_common(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*tree) return cmd_tree(model_path, indices, common);
    if (*rec) return cmd_recover(model_path, signal_path, noise_text, threshold, sparsity, traces, common);
    if (*sim) return cmd_simulate(config_path, trials, noise_text == "none" && !sim->count("--noise") ? "" : noise_text,
                                  threshold, json_path, common);
    if (*pred) return cmd_predict(sigma_noise, sigma_signal, pred_s, pred_n, common);
    if (*val) return cmd_validate(models, max_n, common);
    if (*bench) return cmd_bench(bench_n, bench_s, runs, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
