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

#include "hufsense/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

namespace hufsense {

namespace {

double log_complement_of(double p) {
  return p >= 1.0 ? -std::numeric_limits<double>::infinity() : std::log1p(-p);
}

double q_from_log_complement(double lc) { return -std::expm1(lc); }

}  // namespace

std::uint64_t to_mask(std::span<const Index> indices) {
  std::uint64_t mask = 0;
  for (Index i : indices) {
    if (i < 0 || i >= kMaxExplicitDimension) {
      throw DomainError("index " + std::to_string(i) + " does not fit an explicit support mask");
    }
    mask |= std::uint64_t{1} << i;
  }
  return mask;
}

IndexSet from_mask(std::uint64_t mask) {
  IndexSet out;
  out.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask != 0) {
    out.push_back(static_cast<Index>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

SupportModel::SupportModel(Index n, int s, std::variant<ExplicitTable, Marginals> law)
    : n_(n), s_(s), active_(n), removed_(static_cast<std::size_t>(n), 0), law_(std::move(law)) {}

SupportModel SupportModel::explicit_law(Index n, int max_sparsity,
                                        std::span<const SupportEntry> entries) {
  if (n < 1 || n > kMaxExplicitDimension) {
    throw DomainError("explicit model dimension must lie in [1, 64], got " + std::to_string(n));
  }
  if (max_sparsity < 0 || max_sparsity > n) {
    throw DomainError("max sparsity must lie in [0, n]");
  }
  std::map<std::uint64_t, double> merged;
  double total = 0.0;
  for (const auto& entry : entries) {
    if (!(entry.probability >= 0.0) || !std::isfinite(entry.probability)) {
      throw DomainError("support probabilities must be finite and nonnegative");
    }
    for (Index i : entry.support) {
      if (i < 0 || i >= n) {
        throw DomainError("support index " + std::to_string(i + 1) + " outside [1, " +
                          std::to_string(n) + "]");
      }
    }
    const std::uint64_t mask = to_mask(entry.support);
    if (std::cmp_not_equal(std::popcount(mask), entry.support.size())) {
      throw DomainError("support lists an index twice");
    }
    if (merged.contains(mask)) {
      throw DomainError("support listed twice in explicit table");
    }
    if (entry.probability > 0.0 && std::popcount(mask) > max_sparsity) {
      throw DomainError("support larger than the declared sparsity has positive probability");
    }
    merged.emplace(mask, entry.probability);
    total += entry.probability;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw DomainError("explicit probabilities sum to " + std::to_string(total) + ", expected 1");
  }

  ExplicitTable table;
  for (const auto& [mask, p] : merged) {
    if (p > 0.0) table.rows.push_back({mask, p});
  }
  table.cumulative.reserve(table.rows.size());
  double running = 0.0;
  for (const auto& row : table.rows) {
    running += row.probability;
    table.cumulative.push_back(running);
  }
  return SupportModel(n, max_sparsity, std::move(table));
}

SupportModel SupportModel::independent(std::vector<double> activity, int max_sparsity) {
  if (activity.empty()) throw DomainError("marginal model needs at least one coordinate");
  const auto n = static_cast<Index>(activity.size());
  if (max_sparsity < 0 || max_sparsity > n) throw DomainError("max sparsity must lie in [0, n]");
  Marginals m;
  m.log_complement.reserve(activity.size());
  for (double p : activity) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("marginal activity probabilities must lie in [0, 1]");
    m.log_complement.push_back(log_complement_of(p));
  }
  m.p = std::move(activity);
  return SupportModel(n, max_sparsity, std::move(m));
}

SupportModel SupportModel::uniform_positions(Index n, int s) {
  if (n < 1) throw DomainError("dimension must be positive");
  return independent(std::vector<double>(static_cast<std::size_t>(n), static_cast<double>(s) / n), s);
}

SupportModel SupportModel::exponential_positions(Index n, int s, double mean) {
  if (n < 1) throw DomainError("dimension must be positive");
  if (!(mean > 0.0)) throw DomainError("exponential mean must be positive");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = std::exp(-(i + 1) / mean);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x = std::min(1.0, s * x / total);
  return independent(std::move(w), s);
}

SupportModel::Variant SupportModel::variant() const noexcept {
  return std::holds_alternative<ExplicitTable>(law_) ? Variant::Explicit
                                                     : Variant::IndependentMarginal;
}

bool SupportModel::is_active(Index i) const noexcept {
  return i >= 0 && i < n_ && removed_[static_cast<std::size_t>(i)] == 0;
}

IndexSet SupportModel::active_indices() const {
  IndexSet out;
  out.reserve(static_cast<std::size_t>(active_));
  for (Index i = 0; i < n_; ++i) {
    if (removed_[static_cast<std::size_t>(i)] == 0) out.push_back(i);
  }
  return out;
}

IndexSet SupportModel::conditioned_on() const {
  IndexSet out;
  for (Index i = 0; i < n_; ++i) {
    if (removed_[static_cast<std::size_t>(i)] != 0) out.push_back(i);
  }
  return out;
}

void SupportModel::check_index(Index i) const {
  if (i < 0 || i >= n_) {
    throw DomainError("index " + std::to_string(i + 1) + " outside [1, " + std::to_string(n_) + "]");
  }
  if (removed_[static_cast<std::size_t>(i)] != 0) {
    throw DomainError("index " + std::to_string(i + 1) + " was conditioned on and is no longer active");
  }
}

double SupportModel::explicit_q(std::uint64_t mask) const {
  const auto& table = std::get<ExplicitTable>(law_);
  double q = 0.0;
  for (const auto& row : table.rows) {
    if ((row.mask & mask) != 0) q += row.probability;
  }
  return q;
}

Activity SupportModel::leaf_activity(Index i) const {
  check_index(i);
  if (const auto* m = std::get_if<Marginals>(&law_)) {
    return {0, m->log_complement[static_cast<std::size_t>(i)]};
  }
  return {std::uint64_t{1} << i, 0.0};
}

double SupportModel::q_of(const Activity& activity) const {
  if (std::holds_alternative<Marginals>(law_)) return q_from_log_complement(activity.log_complement);
  return explicit_q(activity.mask);
}

double SupportModel::q_of(std::span<const Index> lambda) const {
  Activity acc;
  for (Index i : lambda) acc = merge(acc, leaf_activity(i));
  return q_of(acc);
}

double SupportModel::probability_empty() const {
  if (const auto* m = std::get_if<Marginals>(&law_)) {
    double lc = 0.0;
    for (Index i = 0; i < n_; ++i) {
      if (removed_[static_cast<std::size_t>(i)] == 0) lc += m->log_complement[static_cast<std::size_t>(i)];
    }
    return std::exp(lc);
  }
  for (const auto& row : std::get<ExplicitTable>(law_).rows) {
    if (row.mask == 0) return row.probability;
  }
  return 0.0;
}

std::vector<SupportEntry> SupportModel::enumerate_supports(Index cap) const {
  std::vector<SupportEntry> out;
  if (const auto* table = std::get_if<ExplicitTable>(&law_)) {
    out.reserve(table->rows.size());
    for (const auto& row : table->rows) out.push_back({from_mask(row.mask), row.probability});
    return out;
  }
  if (active_ > cap) {
    throw UnsupportedOperation("cannot enumerate supports of a marginal model with " +
                               std::to_string(active_) + " active coordinates (cap " +
                               std::to_string(cap) + ")");
  }
  const auto& m = std::get<Marginals>(law_);
  const IndexSet active = active_indices();
  const std::uint64_t count = std::uint64_t{1} << active.size();
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    double p = 1.0;
    IndexSet support;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const double pk = m.p[static_cast<std::size_t>(active[k])];
      if ((bits >> k) & 1U) {
        p *= pk;
        support.push_back(active[k]);
      } else {
        p *= 1.0 - pk;
      }
    }
    if (p > 0.0) out.push_back({std::move(support), p});
  }
  return out;
}

SupportModel SupportModel::condition(std::span<const Index> omega) const {
  for (Index i : omega) check_index(i);
  IndexSet sorted(omega.begin(), omega.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("conditioning set lists an index twice");
  }
  const int remaining_s = std::max(0, s_ - static_cast<int>(sorted.size()));

  SupportModel out = *this;
  out.s_ = remaining_s;
  for (Index i : sorted) out.removed_[static_cast<std::size_t>(i)] = 1;
  out.active_ = active_ - static_cast<Index>(sorted.size());

  if (auto* table = std::get_if<ExplicitTable>(&out.law_)) {
    const std::uint64_t w = to_mask(sorted);
    double z = 0.0;
    for (const auto& row : table->rows) {
      if ((row.mask & w) == w) z += row.probability;
    }
    if (!(z > 0.0)) {
      throw ConditioningError("conditioning event has probability zero");
    }
    ExplicitTable next;
    double running = 0.0;
    for (const auto& row : table->rows) {
      if ((row.mask & w) != w) continue;
      const double p = row.probability / z;
      next.rows.push_back({row.mask & ~w, p});
      running += p;
      next.cumulative.push_back(running);
    }
    *table = std::move(next);
  }
  return out;
}

std::span<const double> SupportModel::marginals() const {
  const auto* m = std::get_if<Marginals>(&law_);
  if (m == nullptr) throw UnsupportedOperation("explicit model has no marginal vector");
  return m->p;
}

std::span<const SupportModel::TableRow> SupportModel::table() const {
  const auto* t = std::get_if<ExplicitTable>(&law_);
  if (t == nullptr) throw UnsupportedOperation("marginal model has no explicit table");
  return t->rows;
}

IndexSet SupportModel::sample_support(std::mt19937_64& rng) const {
  const auto* t = std::get_if<ExplicitTable>(&law_);
  if (t == nullptr) throw UnsupportedOperation("support sampling requires an explicit model");
  std::uniform_real_distribution<double> unit(0.0, t->cumulative.back());
  const double u = unit(rng);
  auto it = std::upper_bound(t->cumulative.begin(), t->cumulative.end(), u);
  if (it == t->cumulative.end()) --it;
  return from_mask(t->rows[static_cast<std::size_t>(it - t->cumulative.begin())].mask);
}

}  // namespace hufsense
