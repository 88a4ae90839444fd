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

#include "hufsense/tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace hufsense {

NodeCosts branch_costs(double q_left, std::size_t n_left, double q_right, std::size_t n_right) {
  const double bits_left = std::log2(static_cast<double>(n_left)) + 1.0;
  const double bits_right = std::log2(static_cast<double>(n_right)) + 1.0;
  return {q_left * bits_left + (1.0 - q_left) * bits_right,
          q_right * bits_right + (1.0 - q_right) * bits_left};
}

SamplingVector::SamplingVector(Index dimension, IndexSet support)
    : dimension_(dimension), support_(std::move(support)) {
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
  if (!support_.empty() && (support_.front() < 0 || support_.back() >= dimension_)) {
    throw DomainError("sampling vector support outside the ambient dimension");
  }
}

SamplingVector SamplingVector::ones(Index dimension) {
  IndexSet all(static_cast<std::size_t>(dimension));
  for (Index i = 0; i < dimension; ++i) all[static_cast<std::size_t>(i)] = i;
  return SamplingVector(dimension, std::move(all));
}

bool SamplingVector::contains(Index i) const {
  return std::binary_search(support_.begin(), support_.end(), i);
}

Eigen::VectorXd SamplingVector::dense() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dimension_);
  for (Index i : support_) out(i) = 1.0;
  return out;
}

std::span<const Index> HuffmanTree::index_set(NodeId id) const {
  const TreeNode& n = node(id);
  return std::span<const Index>(leaf_order_).subspan(static_cast<std::size_t>(n.begin),
                                                     static_cast<std::size_t>(n.size()));
}

IndexSet HuffmanTree::sorted_index_set(NodeId id) const {
  auto span = index_set(id);
  IndexSet out(span.begin(), span.end());
  std::sort(out.begin(), out.end());
  return out;
}

NodeId HuffmanTree::leaf_of(Index i) const {
  if (i < 0 || i >= n_ || leaf_of_[static_cast<std::size_t>(i)] == kNoNode) {
    throw DomainError("index " + std::to_string(i + 1) + " is not a leaf of this tree");
  }
  return leaf_of_[static_cast<std::size_t>(i)];
}

NodeId HuffmanTree::sampled_child(NodeId id) const {
  const TreeNode& n = node(id);
  if (n.is_leaf()) throw DomainError("leaf node has no sampled child");
  return n.sampled == Side::Left ? n.left : n.right;
}

NodeId HuffmanTree::other_child(NodeId id) const {
  const TreeNode& n = node(id);
  if (n.is_leaf()) throw DomainError("leaf node has no children");
  return n.sampled == Side::Left ? n.right : n.left;
}

int HuffmanTree::depth(NodeId id) const {
  int d = 0;
  for (NodeId cur = node(id).parent; cur != kNoNode; cur = node(cur).parent) ++d;
  return d;
}

std::vector<NodeId> HuffmanTree::merge_order() const {
  std::vector<NodeId> out;
  for (auto id = static_cast<NodeId>(leaf_order_.size()); id < static_cast<NodeId>(nodes_.size()); ++id) {
    out.push_back(id);
  }
  return out;
}

HuffmanTree build_tree(const SupportModel& model, std::span<const Index> indices) {
  if (indices.empty()) throw DomainError("cannot build a tree over an empty index set");

  HuffmanTree tree;
  tree.n_ = model.dimension();
  tree.leaf_of_.assign(static_cast<std::size_t>(tree.n_), kNoNode);
  const std::size_t m = indices.size();
  tree.nodes_.reserve(2 * m - 1);

  std::vector<Activity> activity;
  activity.reserve(2 * m - 1);
  for (Index i : indices) {
    activity.push_back(model.leaf_activity(i));
    if (tree.leaf_of_[static_cast<std::size_t>(i)] != kNoNode) {
      throw DomainError("index " + std::to_string(i + 1) + " supplied twice");
    }
    TreeNode leaf;
    leaf.min_index = i;
    leaf.q = model.q_of(activity.back());
    leaf.end = 1;
    tree.leaf_of_[static_cast<std::size_t>(i)] = static_cast<NodeId>(tree.nodes_.size());
    tree.nodes_.push_back(leaf);
  }

  // (q, min index, node id); smallest first.
  using Entry = std::tuple<double, Index, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> live;
  for (NodeId id = 0; id < static_cast<NodeId>(m); ++id) {
    const TreeNode& n = tree.nodes_[static_cast<std::size_t>(id)];
    live.emplace(n.q, n.min_index, id);
  }

  while (live.size() > 1) {
    NodeId a = std::get<2>(live.top());
    live.pop();
    NodeId b = std::get<2>(live.top());
    live.pop();
    if (tree.nodes_[static_cast<std::size_t>(b)].min_index < tree.nodes_[static_cast<std::size_t>(a)].min_index) {
      std::swap(a, b);
    }
    const auto id = static_cast<NodeId>(tree.nodes_.size());
    activity.push_back(SupportModel::merge(activity[static_cast<std::size_t>(a)],
                                           activity[static_cast<std::size_t>(b)]));
    TreeNode& left = tree.nodes_[static_cast<std::size_t>(a)];
    TreeNode& right = tree.nodes_[static_cast<std::size_t>(b)];
    left.parent = id;
    right.parent = id;

    TreeNode merged;
    merged.left = a;
    merged.right = b;
    merged.min_index = left.min_index;
    merged.q = model.q_of(activity.back());
    merged.end = left.end + right.end;  // sizes until ranges are laid out
    merged.costs = branch_costs(left.q, static_cast<std::size_t>(left.end), right.q,
                                static_cast<std::size_t>(right.end));
    merged.sampled = merged.costs.left <= merged.costs.right ? Side::Left : Side::Right;
    tree.nodes_.push_back(merged);
    live.emplace(merged.q, merged.min_index, id);
  }

  // Lay out leaves depth-first, left subtree first, so every node spans a run.
  tree.leaf_order_.reserve(m);
  std::vector<std::pair<NodeId, std::int32_t>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    auto [id, begin] = stack.back();
    stack.pop_back();
    TreeNode& n = tree.nodes_[static_cast<std::size_t>(id)];
    const std::int32_t size = n.end;
    n.begin = begin;
    n.end = begin + size;
    if (n.is_leaf()) {
      tree.leaf_order_.push_back(n.min_index);
    } else {
      const std::int32_t left_size = tree.nodes_[static_cast<std::size_t>(n.left)].end;
      stack.emplace_back(n.right, begin + left_size);
      stack.emplace_back(n.left, begin);
    }
  }
  return tree;
}

HuffmanTree build_tree(const SupportModel& model) {
  const IndexSet active = model.active_indices();
  return build_tree(model, active);
}

NodeCosts node_costs(const HuffmanTree& tree, NodeId id) {
  const TreeNode& n = tree.node(id);
  if (n.is_leaf()) throw DomainError("costs are defined for internal nodes only");
  const TreeNode& l = tree.node(n.left);
  const TreeNode& r = tree.node(n.right);
  return branch_costs(l.q, static_cast<std::size_t>(l.size()), r.q, static_cast<std::size_t>(r.size()));
}

SamplingVector sampling_vector(const HuffmanTree& tree, NodeId id) {
  auto chosen = tree.index_set(tree.sampled_child(id));
  return SamplingVector(tree.dimension(), IndexSet(chosen.begin(), chosen.end()));
}

std::vector<NodeId> special_nodes(const HuffmanTree& tree) {
  std::vector<NodeId> out;
  for (NodeId id : tree.merge_order()) {
    const TreeNode& n = tree.node(id);
    const double ql = tree.node(n.left).q;
    const double qr = tree.node(n.right).q;
    if ((0.5 - ql) * (0.5 - qr) < 0.0) out.push_back(id);
  }
  return out;
}

}  // namespace hufsense
