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

#include "hufsense/validate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "hufsense/recovery.hpp"
#include "hufsense/tree.hpp"

namespace hufsense {

namespace {

constexpr double kTol = 1e-12;

std::vector<double> skewed_weights(std::mt19937_64& rng, std::size_t count) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> skew(0.5, 3.0);
  const double gamma = skew(rng);
  std::vector<double> w(count);
  for (double& x : w) x = std::pow(expo(rng), gamma) + 1e-9;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

std::uint64_t random_subset(std::mt19937_64& rng, Index n, int size) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  return to_mask(std::span<const Index>(idx.data(), static_cast<std::size_t>(size)));
}

std::uint64_t random_mask(std::mt19937_64& rng, Index n) {
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return rng() & all;
}

double classic_huffman_length(std::vector<double> w) {
  std::priority_queue<double, std::vector<double>, std::greater<>> heap(w.begin(), w.end());
  double total = 0.0;
  while (heap.size() > 1) {
    const double a = heap.top();
    heap.pop();
    const double b = heap.top();
    heap.pop();
    total += a + b;
    heap.push(a + b);
  }
  return total;
}

class Recorder {
 public:
  explicit Recorder(std::string name) { check_.name = std::move(name); }
  void expect(bool ok, const std::function<std::string()>& detail) {
    ++check_.cases;
    if (!ok) {
      if (check_.violations == 0) check_.first_violation = detail();
      ++check_.violations;
    }
  }
  InvariantCheck result() const { return check_; }

 private:
  InvariantCheck check_;
};

}  // namespace

SupportModel random_explicit_model(std::mt19937_64& rng, Index n, int s, bool allow_empty) {
  if (n < 1 || n > kMaxExplicitDimension) throw DomainError("random model dimension out of range");
  s = std::clamp(s, 1, static_cast<int>(n));
  std::uniform_int_distribution<int> count(1, 3 * static_cast<int>(n));
  std::uniform_int_distribution<int> size(1, s);
  std::set<std::uint64_t> masks;
  const int wanted = count(rng);
  for (int k = 0; k < wanted; ++k) masks.insert(random_subset(rng, n, size(rng)));
  if (allow_empty) masks.insert(0);

  const std::vector<double> w = skewed_weights(rng, masks.size());
  std::vector<SupportEntry> entries;
  std::size_t k = 0;
  for (std::uint64_t m : masks) entries.push_back({from_mask(m), w[k++]});
  return SupportModel::explicit_law(n, s, entries);
}

SupportModel random_one_sparse_model(std::mt19937_64& rng, Index n) {
  const std::vector<double> w = skewed_weights(rng, static_cast<std::size_t>(n));
  std::vector<SupportEntry> entries;
  for (Index i = 0; i < n; ++i) entries.push_back({{i}, w[static_cast<std::size_t>(i)]});
  return SupportModel::explicit_law(n, 1, entries);
}

std::vector<InvariantCheck> run_invariant_suite(const SuiteOptions& options) {
  std::mt19937_64 rng(options.seed);
  Recorder special("at most one special node per tree");
  Recorder nspecial("min cost <= log2|node| at non-special nodes");
  Recorder any_node("min cost <= log2|node| + 1 at every node");
  Recorder leaves("leaf set equals the input index set");
  Recorder determinism("tree construction is deterministic");
  Recorder monotone("q is monotone under inclusion");
  Recorder subadditive("q is subadditive on disjoint sets");
  Recorder complement("q equals one minus the mass of disjoint supports");
  Recorder conditioning("conditional q matches enumeration");
  Recorder locate_bound("expected locate-one cost <= log2 n + 1 for nonzero signals");
  Recorder one_sparse("1-sparse locate-one cost equals Huffman code length");

  std::uniform_int_distribution<Index> dim(2, std::max<Index>(2, options.max_n));
  std::bernoulli_distribution coin(0.5);

  for (std::size_t trial = 0; trial < options.models; ++trial) {
    const Index n = dim(rng);
    std::uniform_int_distribution<int> sp(1, std::min(options.max_s, static_cast<int>(n)));
    const int s = sp(rng);
    const SupportModel model = random_explicit_model(rng, n, s, coin(rng));
    const HuffmanTree tree = build_tree(model);
    auto where = [&] { return "model #" + std::to_string(trial) + " (n=" + std::to_string(n) + ")"; };

    special.expect(special_nodes(tree).size() <= 1, where);
    const auto specials = special_nodes(tree);
    for (NodeId id : tree.merge_order()) {
      const NodeCosts c = node_costs(tree, id);
      const double lo = std::min(c.left, c.right);
      const double bits = std::log2(static_cast<double>(tree.node(id).size()));
      if (std::find(specials.begin(), specials.end(), id) == specials.end()) {
        nspecial.expect(lo <= bits + kTol, where);
      }
      any_node.expect(lo <= bits + 1.0 + kTol, where);
    }

    IndexSet from_tree = tree.sorted_index_set(tree.root());
    leaves.expect(from_tree == model.active_indices(), where);
    const HuffmanTree again = build_tree(model);
    bool same = again.nodes().size() == tree.nodes().size();
    for (std::size_t k = 0; same && k < tree.nodes().size(); ++k) {
      const TreeNode& a = tree.nodes()[k];
      const TreeNode& b = again.nodes()[k];
      same = a.left == b.left && a.right == b.right && a.q == b.q && a.sampled == b.sampled;
    }
    determinism.expect(same, where);

    for (int r = 0; r < 20; ++r) {
      const std::uint64_t big = random_mask(rng, n);
      const std::uint64_t small = big & random_mask(rng, n);
      const double q_small = model.q_of(from_mask(small));
      const double q_big = model.q_of(from_mask(big));
      monotone.expect(q_small <= q_big + kTol, where);
      const std::uint64_t other = random_mask(rng, n) & ~big;
      subadditive.expect(model.q_of(from_mask(big | other)) <= q_big + model.q_of(from_mask(other)) + kTol, where);
      double disjoint = 0.0;
      for (const auto& row : model.table()) {
        if ((row.mask & big) == 0) disjoint += row.probability;
      }
      complement.expect(std::abs(q_big - (1.0 - disjoint)) <= kTol, where);
    }

    // Condition on part of a support the model can produce.
    const auto table = model.table();
    std::uniform_int_distribution<std::size_t> pick(0, table.size() - 1);
    const std::uint64_t support = table[pick(rng)].mask;
    if (support != 0) {
      const std::uint64_t omega = support & random_mask(rng, n);
      if (std::popcount(omega) < s && std::popcount(omega) < n) {
        const SupportModel cond = model.condition(from_mask(omega));
        double z = 0.0;
        for (const auto& row : table) {
          if ((row.mask & omega) == omega) z += row.probability;
        }
        for (int r = 0; r < 10; ++r) {
          const std::uint64_t lambda = random_mask(rng, n) & ~omega;
          double hit = 0.0;
          for (const auto& row : table) {
            if ((row.mask & omega) == omega && (row.mask & lambda) != 0) hit += row.probability;
          }
          conditioning.expect(std::abs(cond.q_of(from_mask(lambda)) - hit / z) <= kTol, where);
        }
      }
    }

    const double p_empty = model.probability_empty();
    if (p_empty < 1.0) {
      // Expected descent length conditioned on a nonzero signal.
      const double cost = exact_expected_cost(model, s, CostMode::LocateOne);
      double empty_cost = 0.0;
      if (p_empty > 0.0) {
        // The zero vector only ever takes the unmeasured branch.
        NodeId id = tree.root();
        int depth = 0;
        while (!tree.node(id).is_leaf()) {
          id = tree.other_child(id);
          ++depth;
        }
        empty_cost = p_empty * depth;
      }
      const double given_nonzero = (cost - empty_cost) / (1.0 - p_empty);
      locate_bound.expect(given_nonzero <= std::log2(static_cast<double>(n)) + 1.0 + 1e-9, [&] {
        std::ostringstream os;
        os << where() << ": cost " << given_nonzero;
        return os.str();
      });
    }

    const SupportModel one = random_one_sparse_model(rng, n);
    std::vector<double> w;
    for (const auto& row : one.table()) w.push_back(row.probability);
    const double huff = classic_huffman_length(w);
    const double cost = exact_expected_cost(one, 1, CostMode::LocateOne);
    one_sparse.expect(std::abs(cost - huff) <= 1e-9, where);
  }

  return {special.result(),  nspecial.result(),   any_node.result(),     leaves.result(),
          determinism.result(), monotone.result(), subadditive.result(), complement.result(),
          conditioning.result(), locate_bound.result(), one_sparse.result()};
}

}  // namespace hufsense
