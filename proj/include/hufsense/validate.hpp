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
#include <random>
#include <string>
#include <vector>

#include "hufsense/model.hpp"

namespace hufsense {

/// Random explicit s-sparse law on n coordinates: a random number of distinct
/// supports of size 1..s (plus the empty support when allowed) with
/// exponentially distributed weights.
SupportModel random_explicit_model(std::mt19937_64& rng, Index n, int s, bool allow_empty);

/// Random law on the n singletons (P of the empty support is zero).
SupportModel random_one_sparse_model(std::mt19937_64& rng, Index n);

struct InvariantCheck {
  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::string first_violation;

  bool passed() const noexcept { return violations == 0; }
};

struct SuiteOptions {
  std::size_t models = 500;
  Index max_n = 12;
  int max_s = 3;
  std::uint64_t seed = 1;
};

/// Structural and probabilistic invariants over random explicit models:
/// special-node count, the two cost bounds, q monotonicity and
/// subadditivity, and agreement of conditioning with direct enumeration.
std::vector<InvariantCheck> run_invariant_suite(const SuiteOptions& options);

}  // namespace hufsense
