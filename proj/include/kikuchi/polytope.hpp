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

#ifndef KIKUCHI_POLYTOPE_HPP
#define KIKUCHI_POLYTOPE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "kikuchi/models.hpp"
#include "kikuchi/region_graph.hpp"

namespace kikuchi {

/// Vertices plus the member lists of the factors of a two-layer graph.
/// Pairwise graphs are the special case where every factor has two members.
struct FactorGraph {
  int num_vertices = 0;
  std::vector<std::vector<int>> factors;

  int num_factors() const { return static_cast<int>(factors.size()); }
};

FactorGraph factor_graph(const TwoLayerView& view);
FactorGraph factor_graph(const SimpleGraph& graph);

/// Indicator 1_{F'} over the factors.
using EdgeSubset = std::vector<std::uint8_t>;
/// ρ_α per factor; singleton weights are implied by ρ_s = 1 - Σ_{α∋s} ρ_α.
using FactorWeights = std::vector<double>;

/// Every connected component of the incidence graph F' ∪ N(F') has no more
/// edges than vertices.
bool is_single_cycle_forest(const FactorGraph& graph, const EdgeSubset& subset);

/// Same test when every factor is in the subset.
bool is_single_cycle_forest(const FactorGraph& graph);

struct PolytopeMembership {
  bool member = false;
  /// Vertices of a most violated inequality (smallest, then
  /// lexicographically first by bitmask, among ties). Absent when ρ is a
  /// member or lies outside [0,1]^F.
  std::optional<std::vector<int>> violating_U;
  /// Σ_{α∩U≠∅} (|α∩U| - 1) ρ_α - |U| at violating_U.
  double violation = 0.0;
};

/// Σ_{α∩U≠∅} (|α∩U| - 1) ρ_α <= |U| for every U ⊆ V, checked exhaustively,
/// together with 0 <= ρ_α <= 1.
PolytopeMembership in_concavity_polytope(const FactorGraph& graph, const FactorWeights& rho,
                                         int max_vertices = 24);

/// All indicators in 𝔽, in increasing bitmask order (factor 0 is bit 0).
std::vector<EdgeSubset> enumerate_F(const FactorGraph& graph, int max_factors = 20);

/// Random convex combinations of |F| + 1 randomized-greedy maximal
/// single-cycle forests with Dirichlet(1) coefficients.
std::vector<FactorWeights> sample_conv_F(const FactorGraph& graph, int count, std::uint64_t seed);

/// Maximal single-cycle forest obtained by admitting factors greedily in the
/// given order.
EdgeSubset greedy_single_cycle_forest(const FactorGraph& graph, const std::vector<int>& order);

struct WeightedForest {
  EdgeSubset subset;
  double value = 0.0;
};

/// Greedy by decreasing weight (lower edge index first among equals),
/// admitting an edge when the selection stays a single-cycle forest.
WeightedForest max_weight_single_cycle_forest(const SimpleGraph& graph,
                                              const std::vector<double>& weights);

/// Σ_i (|V_i| - α_i) over the threshold graphs G_i = {e : c_e >= i},
/// i = 1..max c, where α_i counts the tree components of G_i.
double lp_upper_bound(const SimpleGraph& graph, const std::vector<double>& weights);

enum class GraphFamily { Complete, Torus };

struct Thresholds {
  double rho_tree = 0.0;
  double rho_cycle = 0.0;
};

/// Closed forms: K_n gives (2/n, 2/(n-1)), T_n gives ((n-1)/(2n), 1/2).
Thresholds uniform_weight_thresholds(GraphFamily family, int n);

/// The same quantities for any simple graph with at least one edge, from
/// ρ_tree = min_U (|U|-1)/|E(U)| and ρ_cycle = min(1, min_U |U|/|E(U)|).
/// Enumerates vertex subsets, so only for small graphs.
Thresholds uniform_weight_thresholds(const SimpleGraph& graph, int max_vertices = 20);

// Convex hull membership ---------------------------------------------------

struct HullDistance {
  /// Euclidean distance from the target to the convex hull.
  double distance = 0.0;
  /// Convex coefficients of the nearest hull point, one per input point.
  std::vector<double> coefficients;
  /// Nearest hull point minus target.
  std::vector<double> direction;
  /// min_i <direction, p_i - target>. Positive certifies that the target is
  /// outside the hull.
  double separation = 0.0;
};

/// Wolfe's minimum-norm-point algorithm on {p_i - target}.
HullDistance hull_distance(const std::vector<std::vector<double>>& points,
                           const std::vector<double>& target);

inline constexpr double kHullTolerance = 1e-9;

struct ConvMembership {
  bool member = false;
  /// Outside only: certified by separation > 0.
  bool certified = false;
  HullDistance detail;
  std::vector<EdgeSubset> vertices;
};

/// ρ ∈ conv(𝔽), by enumerating 𝔽 and measuring the distance to its hull.
ConvMembership in_conv_F(const FactorGraph& graph, const FactorWeights& rho,
                         int max_factors = 20);

/// The maximal elements of {F' : 1_{F'} ∈ 𝔽} in increasing bitmask order.
std::vector<EdgeSubset> maximal_single_cycle_forests(const FactorGraph& graph,
                                                     int max_factors = 20);

struct Proposition1Witness {
  EdgeSubset base;  // F*
  int extra = -1;   // α*
  FactorWeights rho;
};

/// When the whole graph is not a single-cycle forest and some maximal F*
/// has a forest as its incidence graph, returns ρ = 1_{F*} + ε 1_{α*} with
/// ε = 1/(|α*| - 1), which lies in ℂ but not in conv(𝔽). F* is the first
/// qualifying maximal element and α* the lowest factor outside it.
std::optional<Proposition1Witness> proposition1_witness(const FactorGraph& graph,
                                                        int max_factors = 20);

}  // namespace kikuchi

#endif  // KIKUCHI_POLYTOPE_HPP
