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

#ifndef KIKUCHI_CONCAVITY_HPP
#define KIKUCHI_CONCAVITY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kikuchi/objective.hpp"
#include "kikuchi/region_graph.hpp"
#include "kikuchi/tables.hpp"

namespace kikuchi {

/// Result of a subset-sum concavity test.
///
/// min_value is the smallest left-hand side over the subsets examined,
/// including the empty set (which contributes 0), so a passing report has
/// min_value == 0 unless every nonempty subset is strictly positive.
struct ConcavityReport {
  bool satisfied = true;
  /// Region indices of a minimizing subset, present iff !satisfied.
  std::optional<std::vector<int>> violating_set;
  double min_value = 0.0;
};

struct ConcavityOptions {
  /// Largest ground set enumerated exhaustively.
  int max_exhaustive = 24;
};

/// Σ_{s ∈ ℱ(S)} ρ_s >= 0 for all S ⊆ R. On two-layer graphs only S = {α}
/// and S = U ⊆ V are examined, which is equivalent; otherwise every subset
/// of R is enumerated (TooManyRegions past the cap).
ConcavityReport check_kikuchi_concavity(const RegionGraph& graph, const WeightVector& rho,
                                        const ConcavityOptions& opts = {});

/// ρ_α >= 0 for every factor and Σ_{s∈U} ρ_s + Σ_{α∩U≠∅} ρ_α >= 0 for all
/// U ⊆ V. A negative factor weight is reported as the violating set {α}.
ConcavityReport check_bethe_concavity(const TwoLayerView& view, const WeightVector& rho,
                                      const ConcavityOptions& opts = {});

// Weighted Hall lemma ------------------------------------------------------

struct BipartiteEdge {
  int left = 0;
  int right = 0;
};

/// γ_e >= 0 per bipartite edge.
struct EdgeLabeling {
  std::vector<double> labels;
};

/// Finds γ >= 0 with Σ_{t∈N(s)} γ_st = w(s) on the left and
/// Σ_{s∈N(t)} γ_st <= w(t) on the right, via max-flow on the transport
/// network source → left → right → sink. When the flow cannot saturate the
/// left side, throws HallConditionViolated with the left vertices on the
/// source side of a minimum cut, which satisfy w(U) > w(N(U)).
EdgeLabeling hall_labeling(const std::vector<double>& left_weights,
                           const std::vector<double>& right_weights,
                           const std::vector<BipartiteEdge>& edges);

/// Bipartite instance used to prove the Kikuchi sufficient condition:
/// left = regions with ρ < 0 (weight -ρ), right = regions with ρ > 0
/// (weight ρ), and an edge whenever the left region is strictly inside the
/// right one.
struct HallInstance {
  std::vector<int> left_regions;
  std::vector<int> right_regions;
  std::vector<double> left_weights;
  std::vector<double> right_weights;
  std::vector<BipartiteEdge> edges;
};

HallInstance kikuchi_hall_instance(const RegionGraph& graph, const WeightVector& rho);

// Curvature probes ---------------------------------------------------------

struct ProbeOptions {
  double step = 1e-4;
  int random_directions = 16;
  std::uint64_t seed = 1;
};

struct ProbeResult {
  /// Largest central second difference of H(·; ρ) found, per unit step².
  double max_curvature = 0.0;
  /// Unit-norm tangent direction attaining it, shaped like τ.
  RegionTables direction;
  /// Largest eigenvalue of the Hessian of H(·; ρ) restricted to the
  /// tangent space, computed in closed form at τ.
  double restricted_hessian_max = 0.0;
};

/// Probes second directional differences of the Kikuchi entropy at an
/// interior point along tangent directions of the local polytope: an
/// orthonormal basis, seeded random combinations of it, and the top
/// eigenvector of the restricted Hessian. Throws BoundaryPoint when some
/// entry of τ is below 10 * step.
ProbeResult hessian_probe(const RegionGraph& graph, const Pseudomarginals& tau,
                          const WeightVector& rho, const ProbeOptions& opts = {});

// Symmetric family ---------------------------------------------------------

/// (q1, q2): common odd and even moments of every factor.
struct SymmetricPoint {
  double q1 = 0.0;
  double q2 = 0.0;
};

/// True iff every table entry of the symmetric family is >= margin for all
/// factor sizes in `sizes` (size 1 stands for the singleton tables).
bool symmetric_point_feasible(const std::vector<int>& sizes, SymmetricPoint q,
                              double margin = 0.0);

/// Table of the symmetric family on a region of k binary variables.
FactorTable symmetric_table(const std::vector<int>& scope, SymmetricPoint q);

/// τ_s(x) = (1 + x q1)/2 and, for |α| = k, 2^{-k}(1 ± 2^{k-1} q1 +
/// (2^{k-1}-1) q2) on the all-equal assignments and 2^{-k}(1 - q2)
/// elsewhere. Requires a binary two-layer graph; InfeasiblePoint when an
/// entry is negative.
Pseudomarginals symmetric_pseudomarginal(const RegionGraph& graph, SymmetricPoint q);

/// The same family placed on the vertices of U only: vertices outside U are
/// uniform and each factor α carries the family table of α ∩ U times
/// uniform on α ∖ U. The Kikuchi entropy along this slice differs from the
/// entropy of the sub-region graph on U by a constant.
Pseudomarginals zeta_slice(const RegionGraph& graph, const std::vector<int>& subset,
                           SymmetricPoint q);

/// c_1 = Σ_{s∈U} ρ_s + Σ_{|α∩U|=1} ρ_α and c_k = Σ_{|α∩U|=k} ρ_α.
std::map<int, double> zeta_coefficients(const TwoLayerView& view, const WeightVector& rho,
                                        const std::vector<int>& subset);

struct ZetaHessian {
  double d11 = 0.0;
  double d22 = 0.0;
};

/// Closed-form Hessian diagonal of ζ(q1, q2) = H(τ[q1, q2]; ρ) at q1 = 0.
ZetaHessian zeta_hessian(const std::map<int, double>& c, double q2);

}  // namespace kikuchi

#endif  // KIKUCHI_CONCAVITY_HPP
