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

#include <filesystem>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "json.hpp"

#include "hufsense/model.hpp"
#include "hufsense/recovery.hpp"
#include "hufsense/sim.hpp"
#include "hufsense/tree.hpp"

namespace hufsense {

/// Malformed input document; the message names the offending field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);

// All indices in documents are one-based.

/// {"explicit": [{"support": [1, 2], "p": 0.31}, ...], "n": 4, "s": 2}
/// {"marginal": {"n": 1024, "s": 8, "position_pdf": "uniform" | "exponential", "mean": 10}}
/// {"marginal": {"p": [0.1, 0.2, ...], "s": 1}}
SupportModel model_from_json(const Json& doc);
Json model_to_json(const SupportModel& model);

/// {"n": 4, "entries": [{"index": 1, "value": 2.5}, ...]}
Eigen::VectorXd signal_from_json(const Json& doc);
Json signal_to_json(const Eigen::VectorXd& x);

/// Nested {"indexSet", "q", "ell": [left, right], "sampled": "left" | "right", "left", "right"}.
Json tree_to_json(const HuffmanTree& tree);

Json recovery_to_json(const RecoveryResult& result, bool include_traces);

NoiseSpec noise_from_json(const Json& doc);
Json noise_to_json(const NoiseSpec& noise);

/// {"name", "model", "generator", "noise", "threshold", "trials", "sweep": {"variable", "values"}, "seed", "workers"}
CampaignConfig campaign_from_json(const Json& doc);
Json campaign_to_json(const CampaignConfig& config);
Json report_to_json(const CampaignReport& report);

}  // namespace hufsense
