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
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hufsense {

/// Zero-based coordinate index. File formats and dumps use one-based indices.
using Index = std::int32_t;

/// Sorted, duplicate-free list of indices.
using IndexSet = std::vector<Index>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when conditioning on an event of probability zero.
class ConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SupportEntry {
  IndexSet support;
  double probability = 0.0;
};

/// Running summary of a set of indices, sufficient to evaluate its activity
/// probability in O(1) (marginal law) or O(table) (explicit law) after a merge.
struct Activity {
  std::uint64_t mask = 0;
  double log_complement = 0.0;
};

inline constexpr Index kDefaultEnumerationCap = 20;
inline constexpr Index kMaxExplicitDimension = 64;
inline constexpr double kNormalizationTolerance = 1e-12;

/// Probability law over the supports of a random s-sparse vector.
///
/// Two representations are available. The explicit law stores P over subsets
/// of {0..n-1} as a table and answers every query exactly. The independent
/// marginal law stores one activity probability per coordinate, so that the
/// probability of the union event factorizes; it scales to large n.
///
/// Conditioning on a set of coordinates known to be nonzero removes those
/// coordinates from the active index set; the ambient dimension is kept so
/// that indices stay stable across recovery rounds.
class SupportModel {
 public:
  enum class Variant { Explicit, IndependentMarginal };

  static SupportModel explicit_law(Index n, int max_sparsity,
                                   std::span<const SupportEntry> entries);
  static SupportModel independent(std::vector<double> activity, int max_sparsity);
  /// p_i = s/n for every coordinate.
  static SupportModel uniform_positions(Index n, int s);
  /// p_i proportional to exp(-(i+1)/mean), scaled so that sum p_i = s and clamped to 1.
  static SupportModel exponential_positions(Index n, int s, double mean);

  Variant variant() const noexcept;
  bool is_explicit() const noexcept { return variant() == Variant::Explicit; }
  Index dimension() const noexcept { return n_; }
  int max_sparsity() const noexcept { return s_; }

  bool is_active(Index i) const noexcept;
  IndexSet active_indices() const;
  IndexSet conditioned_on() const;
  Index active_count() const noexcept { return active_; }

  /// Probability that at least one coordinate of `lambda` is nonzero.
  double q_of(std::span<const Index> lambda) const;
  /// Probability of the zero vector.
  double probability_empty() const;

  std::vector<SupportEntry> enumerate_supports(Index cap = kDefaultEnumerationCap) const;

  /// Law of the remaining coordinates given that every index in `omega` is nonzero.
  SupportModel condition(std::span<const Index> omega) const;

  /// Per-coordinate activity (independent marginal law only).
  std::span<const double> marginals() const;

  /// Draw a support from the explicit table.
  IndexSet sample_support(std::mt19937_64& rng) const;

  Activity leaf_activity(Index i) const;
  static Activity merge(const Activity& a, const Activity& b) noexcept {
    return {a.mask | b.mask, a.log_complement + b.log_complement};
  }
  double q_of(const Activity& activity) const;

  /// Explicit law only: the table as (bitmask, probability) rows.
  struct TableRow {
    std::uint64_t mask;
    double probability;
  };
  std::span<const TableRow> table() const;

 private:
  struct ExplicitTable {
    std::vector<TableRow> rows;
    std::vector<double> cumulative;
  };
  struct Marginals {
    std::vector<double> p;
    std::vector<double> log_complement;
  };

  SupportModel(Index n, int s, std::variant<ExplicitTable, Marginals> law);
  void check_index(Index i) const;
  double explicit_q(std::uint64_t mask) const;

  Index n_ = 0;
  int s_ = 0;
  Index active_ = 0;
  std::vector<char> removed_;
  std::variant<ExplicitTable, Marginals> law_;
};

std::uint64_t to_mask(std::span<const Index> indices);
IndexSet from_mask(std::uint64_t mask);

}  // namespace hufsense
