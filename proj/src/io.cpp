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

#include "hufsense/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

namespace hufsense {

namespace {

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw FormatError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(where + "." + key + ": missing field");
  return *it;
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where + ": expected a number");
  return v.get<double>();
}

std::int64_t integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw FormatError(where + ": expected an integer");
  return v.get<std::int64_t>();
}

std::string text(const Json& v, const std::string& where) {
  if (!v.is_string()) throw FormatError(where + ": expected a string");
  return v.get<std::string>();
}

double number_or(const Json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj[key], where + "." + key) : fallback;
}

Index one_based(const Json& v, const std::string& where) {
  const std::int64_t i = integer(v, where);
  if (i < 1 || i > std::numeric_limits<Index>::max()) throw FormatError(where + ": indices are one-based");
  return static_cast<Index>(i - 1);
}

PositionLaw position_law(const std::string& name, const std::string& where) {
  if (name == "uniform") return PositionLaw::Uniform;
  if (name == "exponential") return PositionLaw::Exponential;
  if (name == "model") return PositionLaw::Model;
  throw FormatError(where + ": unknown position law '" + name + "'");
}

std::string position_name(PositionLaw law) {
  switch (law) {
    case PositionLaw::Uniform:
      return "uniform";
    case PositionLaw::Exponential:
      return "exponential";
    case PositionLaw::Model:
      return "model";
  }
  return "uniform";
}

Json one_based_list(std::span<const Index> indices) {
  Json out = Json::array();
  for (Index i : indices) out.push_back(i + 1);
  return out;
}

SupportModel explicit_from_json(const Json& doc) {
  const Json& rows = doc["explicit"];
  if (!rows.is_array()) throw FormatError("model.explicit: expected an array");
  std::vector<SupportEntry> entries;
  Index max_index = 0;
  int max_size = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string where = "model.explicit[" + std::to_string(k) + "]";
    const Json& support = field(rows[k], "support", where);
    if (!support.is_array()) throw FormatError(where + ".support: expected an array");
    SupportEntry e;
    for (std::size_t j = 0; j < support.size(); ++j) {
      e.support.push_back(one_based(support[j], where + ".support[" + std::to_string(j) + "]"));
    }
    std::sort(e.support.begin(), e.support.end());
    e.probability = number(field(rows[k], "p", where), where + ".p");
    if (!e.support.empty()) max_index = std::max(max_index, e.support.back() + 1);
    if (e.probability > 0.0) max_size = std::max(max_size, static_cast<int>(e.support.size()));
    entries.push_back(std::move(e));
  }
  const auto n = static_cast<Index>(doc.contains("n") ? integer(doc["n"], "model.n") : std::max<Index>(max_index, 1));
  const int s = doc.contains("s") ? static_cast<int>(integer(doc["s"], "model.s")) : max_size;
  return SupportModel::explicit_law(n, s, entries);
}

SupportModel marginal_from_json(const Json& m) {
  if (!m.is_object()) throw FormatError("model.marginal: expected an object");
  if (m.contains("p")) {
    const Json& p = m["p"];
    if (!p.is_array()) throw FormatError("model.marginal.p: expected an array");
    std::vector<double> probs;
    for (std::size_t k = 0; k < p.size(); ++k) probs.push_back(number(p[k], "model.marginal.p[" + std::to_string(k) + "]"));
    double total = 0.0;
    for (double x : probs) total += x;
    const int s = m.contains("s") ? static_cast<int>(integer(m["s"], "model.marginal.s"))
                                  : static_cast<int>(std::ceil(total - 1e-9));
    return SupportModel::independent(std::move(probs), s);
  }
  const auto n = static_cast<Index>(integer(field(m, "n", "model.marginal"), "model.marginal.n"));
  const int s = static_cast<int>(integer(field(m, "s", "model.marginal"), "model.marginal.s"));
  const std::string pdf = m.contains("position_pdf") ? text(m["position_pdf"], "model.marginal.position_pdf") : "uniform";
  const PositionLaw law = position_law(pdf, "model.marginal.position_pdf");
  if (law == PositionLaw::Exponential) {
    return SupportModel::exponential_positions(n, s, number_or(m, "mean", 10.0, "model.marginal"));
  }
  if (law != PositionLaw::Uniform) throw FormatError("model.marginal.position_pdf: expected uniform or exponential");
  return SupportModel::uniform_positions(n, s);
}

ModelSpec model_spec_from_json(const Json& doc) {
  ModelSpec spec;
  if (doc.contains("explicit")) {
    spec.kind = ModelSpec::Kind::Explicit;
    spec.explicit_model = model_from_json(doc);
    return spec;
  }
  const Json& m = field(doc, "marginal", "config.model");
  spec.kind = ModelSpec::Kind::Marginal;
  const std::string pdf = m.contains("position_pdf") ? text(m["position_pdf"], "config.model.marginal.position_pdf") : "uniform";
  spec.position_pdf = position_law(pdf, "config.model.marginal.position_pdf");
  spec.mean = number_or(m, "mean", 10.0, "config.model.marginal");
  return spec;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

SupportModel model_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("model: expected an object");
  try {
    if (doc.contains("explicit")) return explicit_from_json(doc);
    if (doc.contains("marginal")) return marginal_from_json(doc["marginal"]);
  } catch (const DomainError& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
  throw FormatError("model: expected an 'explicit' or 'marginal' field");
}

Json model_to_json(const SupportModel& model) {
  Json out;
  if (model.is_explicit()) {
    Json rows = Json::array();
    for (const auto& e : model.enumerate_supports()) {
      rows.push_back({{"support", one_based_list(e.support)}, {"p", e.probability}});
    }
    out["explicit"] = rows;
    out["n"] = model.dimension();
    out["s"] = model.max_sparsity();
  } else {
    const auto p = model.marginals();
    out["marginal"] = {{"p", std::vector<double>(p.begin(), p.end())}, {"s", model.max_sparsity()}};
  }
  const IndexSet omega = model.conditioned_on();
  if (!omega.empty()) out["conditioned_on"] = one_based_list(omega);
  return out;
}

Eigen::VectorXd signal_from_json(const Json& doc) {
  const auto n = integer(field(doc, "n", "signal"), "signal.n");
  if (n < 1) throw FormatError("signal.n: must be positive");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const Json& entries = field(doc, "entries", "signal");
  if (!entries.is_array()) throw FormatError("signal.entries: expected an array");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string where = "signal.entries[" + std::to_string(k) + "]";
    const Index i = one_based(field(entries[k], "index", where), where + ".index");
    if (i >= n) throw FormatError(where + ".index: outside [1, n]");
    x(i) = number(field(entries[k], "value", where), where + ".value");
  }
  return x;
}

Json signal_to_json(const Eigen::VectorXd& x) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) entries.push_back({{"index", i + 1}, {"value", x(i)}});
  }
  return {{"n", x.size()}, {"entries", entries}};
}

Json tree_to_json(const HuffmanTree& tree) {
  std::function<Json(NodeId)> dump = [&](NodeId id) {
    const TreeNode& n = tree.node(id);
    Json out;
    out["indexSet"] = one_based_list(tree.sorted_index_set(id));
    out["q"] = n.q;
    if (!n.is_leaf()) {
      out["ell"] = {n.costs.left, n.costs.right};
      out["sampled"] = n.sampled == Side::Left ? "left" : "right";
      out["left"] = dump(n.left);
      out["right"] = dump(n.right);
    }
    return out;
  };
  return dump(tree.root());
}

Json recovery_to_json(const RecoveryResult& result, bool include_traces) {
  Json out;
  out["n"] = result.estimate.size();
  Json recovered = Json::array();
  for (std::size_t k = 0; k < result.found.size(); ++k) {
    recovered.push_back({{"index", result.found[k] + 1}, {"value", result.values[k]}});
  }
  out["recovered"] = recovered;
  out["order"] = one_based_list(result.found);
  out["total_measurements"] = result.total_measurements;
  out["prechecked"] = result.prechecked;
  out["terminated_on_zero"] = result.terminated_on_zero;
  if (include_traces) {
    Json rounds = Json::array();
    for (const auto& trace : result.rounds) {
      Json steps = Json::array();
      for (const auto& step : trace.steps) {
        Json s;
        if (!step.node.empty()) s["node"] = one_based_list(step.node);
        s["node_size"] = step.node_size;
        if (!step.measured.empty()) s["measured"] = one_based_list(step.measured);
        s["value"] = step.value;
        s["branch"] = step.took_measured ? "measured" : "sibling";
        steps.push_back(std::move(s));
      }
      rounds.push_back({{"leaf", trace.leaf + 1}, {"leaf_value", trace.leaf_value}, {"steps", steps}});
    }
    out["rounds"] = rounds;
  }
  return out;
}

NoiseSpec noise_from_json(const Json& doc) {
  if (doc.is_null()) return NoiseSpec::none();
  const std::string kind = text(field(doc, "kind", "noise"), "noise.kind");
  try {
    if (kind == "none") return NoiseSpec::none();
    if (kind == "uniform") return NoiseSpec::uniform(number(field(doc, "amplitude", "noise"), "noise.amplitude"));
    if (kind == "gaussian") return NoiseSpec::gaussian(number(field(doc, "sigma", "noise"), "noise.sigma"));
  } catch (const DomainError& e) {
    throw FormatError(std::string("noise: ") + e.what());
  }
  throw FormatError("noise.kind: unknown noise kind '" + kind + "'");
}

Json noise_to_json(const NoiseSpec& noise) {
  switch (noise.kind) {
    case NoiseKind::Uniform:
      return {{"kind", "uniform"}, {"amplitude", noise.amplitude}};
    case NoiseKind::Gaussian:
      return {{"kind", "gaussian"}, {"sigma", noise.sigma}};
    case NoiseKind::None:
      break;
  }
  return {{"kind", "none"}};
}

CampaignConfig campaign_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("config: expected an object");
  CampaignConfig c;
  if (doc.contains("name")) c.name = text(doc["name"], "config.name");
  c.model = model_spec_from_json(field(doc, "model", "config"));

  const Json& g = field(doc, "generator", "config");
  c.generator.n = static_cast<Index>(integer(field(g, "n", "config.generator"), "config.generator.n"));
  c.generator.s = g.contains("s") ? static_cast<int>(integer(g["s"], "config.generator.s")) : 1;
  c.generator.amplitude = number_or(g, "amplitude", 1.0, "config.generator");
  c.generator.positions = position_law(
      g.contains("positions") ? text(g["positions"], "config.generator.positions") : "uniform",
      "config.generator.positions");
  c.generator.mean = number_or(g, "mean", 10.0, "config.generator");
  if (c.generator.positions == PositionLaw::Model) {
    if (c.model.kind != ModelSpec::Kind::Explicit) {
      throw FormatError("config.generator.positions: 'model' requires an explicit model");
    }
    c.generator.support_law = c.model.explicit_model;
  }

  if (doc.contains("noise")) c.noise = noise_from_json(doc["noise"]);
  if (doc.contains("threshold") && !doc["threshold"].is_null()) {
    c.threshold = number(doc["threshold"], "config.threshold");
    if (*c.threshold < 0.0) throw FormatError("config.threshold: must be nonnegative");
  }
  if (doc.contains("trials")) {
    const auto t = integer(doc["trials"], "config.trials");
    if (t < 1) throw FormatError("config.trials: must be at least 1");
    c.trials = static_cast<std::size_t>(t);
  }
  if (doc.contains("sweep")) {
    const Json& s = doc["sweep"];
    const std::string var = text(field(s, "variable", "config.sweep"), "config.sweep.variable");
    if (var == "s") {
      c.sweep = SweepVariable::Sparsity;
    } else if (var == "N") {
      c.sweep = SweepVariable::NoiseAmplitude;
    } else if (var == "r") {
      c.sweep = SweepVariable::LogDimension;
    } else if (var == "none") {
      c.sweep = SweepVariable::None;
    } else {
      throw FormatError("config.sweep.variable: expected s, N, r or none");
    }
    if (c.sweep != SweepVariable::None) {
      const Json& vals = field(s, "values", "config.sweep");
      if (!vals.is_array() || vals.empty()) throw FormatError("config.sweep.values: expected a nonempty array");
      for (std::size_t k = 0; k < vals.size(); ++k) {
        c.values.push_back(number(vals[k], "config.sweep.values[" + std::to_string(k) + "]"));
      }
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      throw FormatError("config.seed: expected an integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("workers")) c.workers = static_cast<unsigned>(integer(doc["workers"], "config.workers"));
  return c;
}

Json campaign_to_json(const CampaignConfig& c) {
  Json out;
  if (!c.name.empty()) out["name"] = c.name;
  if (c.model.kind == ModelSpec::Kind::Explicit && c.model.explicit_model) {
    out["model"] = model_to_json(*c.model.explicit_model);
  } else {
    out["model"] = {{"marginal", {{"position_pdf", position_name(c.model.position_pdf)}, {"mean", c.model.mean}}}};
  }
  out["generator"] = {{"n", c.generator.n},
                      {"s", c.generator.s},
                      {"amplitude", c.generator.amplitude},
                      {"positions", position_name(c.generator.positions)},
                      {"mean", c.generator.mean}};
  out["noise"] = noise_to_json(c.noise);
  out["threshold"] = c.threshold ? Json(*c.threshold) : Json(nullptr);
  out["trials"] = c.trials;
  static constexpr const char* kSweep[] = {"none", "s", "N", "r"};
  out["sweep"] = {{"variable", kSweep[static_cast<int>(c.sweep)]}, {"values", c.values}};
  out["seed"] = c.seed;
  out["workers"] = c.workers;
  return out;
}

Json report_to_json(const CampaignReport& report) {
  Json points = Json::array();
  for (const auto& p : report.points) {
    points.push_back({{"sweep_value", p.sweep_value},
                      {"trials", p.trials},
                      {"mean_count", p.mean_count},
                      {"var_count", p.var_count},
                      {"mean_rel_err_pct", p.mean_rel_err_pct},
                      {"median_rel_err_pct", p.median_rel_err_pct},
                      {"success_rate", p.success_rate},
                      {"seconds", p.seconds},
                      {"failures", p.failures},
                      {"threshold", p.threshold}});
  }
  return {{"config", campaign_to_json(report.config)}, {"seed", report.config.seed}, {"points", points}};
}

}  // namespace hufsense
