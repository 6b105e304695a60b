// Copyright 2026 The kikuchi Authors.
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

#ifndef KIKUCHI_REGION_GRAPH_HPP
#define KIKUCHI_REGION_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kikuchi/models.hpp"

namespace kikuchi {

/// A set of regions (vertex subsets) ordered by containment.
///
/// Regions are kept as sorted vertex lists and are addressed everywhere by
/// their index in construction order. The object is immutable after
/// construction.
class RegionGraph {
 public:
  /// Uniform domain size for every vertex.
  static RegionGraph build(int num_vertices, int domain_size,
                           std::vector<std::vector<int>> regions);
  /// Per-vertex domain sizes.
  static RegionGraph build(std::vector<int> domain_sizes,
                           std::vector<std::vector<int>> regions);

  int num_vertices() const { return static_cast<int>(domain_sizes_.size()); }
  int num_regions() const { return static_cast<int>(regions_.size()); }
  int domain_size(int vertex) const { return domain_sizes_[vertex]; }
  const std::vector<int>& domain_sizes() const { return domain_sizes_; }

  const std::vector<int>& region(int r) const { return regions_[r]; }
  const std::vector<std::vector<int>>& regions() const { return regions_; }

  /// Number of joint assignments of region r.
  std::size_t table_size(int r) const;

  /// True iff region t ⊆ region u (t == u allowed).
  bool contains(int u, int t) const { return contains_[u * num_regions() + t]; }

  /// Direct containments (parent, child) with no region strictly between,
  /// sorted by (parent, child).
  const std::vector<std::pair<int, int>>& hasse_edges() const { return hasse_; }

  /// 𝒫(r): regions s with r ≺ s.
  const std::vector<int>& parents(int r) const { return parents_[r]; }
  /// 𝒞(r): regions s with s ≺ r.
  const std::vector<int>& children(int r) const { return children_[r]; }

  /// 𝒜(r) = {s : r ⊊ s}.
  std::vector<int> ancestors(int r) const;
  /// ℱ(r) = {s : r ⊆ s}.
  std::vector<int> forebears(int r) const;
  /// N(r) = {s : r ⊆ s or s ⊆ r}.
  std::vector<int> neighbors(int r) const;
  /// All pairs (u, t) with t ⊊ u.
  std::vector<std::pair<int, int>> strict_containments() const;

  std::optional<int> find_region(std::vector<int> vertices) const;

 private:
  RegionGraph() = default;

  std::vector<int> domain_sizes_;
  std::vector<std::vector<int>> regions_;
  std::vector<char> contains_;
  std::vector<std::pair<int, int>> hasse_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
};

/// c_r = 1 - Σ_{s ∈ 𝒜(r)} c_s, evaluated from the maximal regions down.
std::vector<double> overcounting_numbers(const RegionGraph& graph);

/// Bethe-case view of a region graph: singleton regions V and larger
/// regions F ("factors"), where the only containments are singletons inside
/// factors.
struct TwoLayerView {
  int num_vertices = 0;
  /// Region index of {v} for every vertex v, or -1 when {v} is not a region.
  std::vector<int> singleton_region;
  /// Vertices v that have a singleton region, ascending.
  std::vector<int> vertices;
  /// Region index of each factor, in region order.
  std::vector<int> factor_regions;
  /// Members of each factor (sorted vertex ids).
  std::vector<std::vector<int>> factor_members;
  /// For each vertex, positions (into factor_regions) of the factors that
  /// contain it.
  std::vector<std::vector<int>> factors_of_vertex;

  int num_factors() const { return static_cast<int>(factor_regions.size()); }
};

/// Throws NotTwoLayer when two regions of size >= 2 are nested.
TwoLayerView two_layer_view(const RegionGraph& graph);

/// Singletons 0..n-1 followed by the edges in list order; binary domains.
RegionGraph from_ising(const IsingModel& model);
RegionGraph pairwise_region_graph(const SimpleGraph& graph);

}  // namespace kikuchi

#endif  // KIKUCHI_REGION_GRAPH_HPP
