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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hufsense/model.hpp"

namespace hufsense {

enum class Side : std::uint8_t { Left, Right };

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct NodeCosts {
  double left = 0.0;
  double right = 0.0;
};

/// Expected-descent proxies of measuring either child of a node whose
/// children have activity q_left, q_right and sizes n_left, n_right.
NodeCosts branch_costs(double q_left, std::size_t n_left, double q_right, std::size_t n_right);

struct TreeNode {
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  NodeId parent = kNoNode;
  // Range into HuffmanTree::leaf_order(); every node covers a contiguous run.
  std::int32_t begin = 0;
  std::int32_t end = 0;
  Index min_index = 0;
  double q = 0.0;
  NodeCosts costs;
  Side sampled = Side::Left;

  bool is_leaf() const noexcept { return left == kNoNode; }
  std::int32_t size() const noexcept { return end - begin; }
};

/// Binary characteristic vector of an index set over the ambient dimension.
class SamplingVector {
 public:
  SamplingVector() = default;
  SamplingVector(Index dimension, IndexSet support);
  static SamplingVector ones(Index dimension);

  Index dimension() const noexcept { return dimension_; }
  std::span<const Index> support() const noexcept { return support_; }
  bool contains(Index i) const;

  Eigen::VectorXd dense() const;

  /// <chi, x>
  template <typename Derived>
  typename Derived::Scalar apply(const Eigen::MatrixBase<Derived>& x) const {
    typename Derived::Scalar sum(0);
    for (Index i : support_) sum += x(i);
    return sum;
  }

  bool operator==(const SamplingVector&) const = default;

 private:
  Index dimension_ = 0;
  IndexSet support_;
};

/// Huffman planning tree over a set of coordinates.
///
/// Leaves occupy ids [0, leaf_count) in the order the indices were supplied;
/// internal nodes follow in merge order, so the root is the last node.
class HuffmanTree {
 public:
  NodeId root() const noexcept { return static_cast<NodeId>(nodes_.size()) - 1; }
  Index dimension() const noexcept { return n_; }
  std::size_t leaf_count() const noexcept { return leaf_order_.size(); }

  const TreeNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }

  /// Indices under `id`, in tree order (not sorted).
  std::span<const Index> index_set(NodeId id) const;
  IndexSet sorted_index_set(NodeId id) const;
  std::span<const Index> leaf_order() const noexcept { return leaf_order_; }

  NodeId leaf_of(Index i) const;
  NodeId sampled_child(NodeId id) const;
  NodeId other_child(NodeId id) const;
  int depth(NodeId id) const;

  /// Internal nodes in the order they were created.
  std::vector<NodeId> merge_order() const;

 private:
  friend HuffmanTree build_tree(const SupportModel& model, std::span<const Index> indices);

  Index n_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<Index> leaf_order_;
  std::vector<NodeId> leaf_of_;
};

/// Repeatedly merges the two live nodes of smallest activity q, recomputing
/// the merged node's q from the model. Ties go to the smaller minimum index,
/// which also becomes the left child.
HuffmanTree build_tree(const SupportModel& model, std::span<const Index> indices);
/// Tree over the model's active coordinates.
HuffmanTree build_tree(const SupportModel& model);

NodeCosts node_costs(const HuffmanTree& tree, NodeId id);
SamplingVector sampling_vector(const HuffmanTree& tree, NodeId id);

/// Internal nodes whose children's activities straddle 1/2 strictly.
std::vector<NodeId> special_nodes(const HuffmanTree& tree);

}  // namespace hufsense
