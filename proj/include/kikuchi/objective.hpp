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

#ifndef KIKUCHI_OBJECTIVE_HPP
#define KIKUCHI_OBJECTIVE_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kikuchi/models.hpp"
#include "kikuchi/region_graph.hpp"
#include "kikuchi/tables.hpp"

namespace kikuchi {

/// One weight ρ_r per region, indexed like the region graph.
struct WeightVector {
  std::vector<double> values;

  WeightVector() = default;
  explicit WeightVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t r) { return values[r]; }
  double operator[](std::size_t r) const { return values[r]; }
};

/// B_{θ,ρ}(τ) split into its two parts; total == inner_product + entropy.
struct ObjectiveValue {
  double inner_product = 0.0;
  double entropy = 0.0;
  double total = 0.0;
};

struct ConsistencyReport {
  bool passed = false;
  /// Largest |Σ_{x_{u∖t}} τ_u − τ_t| over all containments t ⊊ u.
  double max_residual = 0.0;
  /// The (u, t) pair attaining max_residual, if any containment exists.
  std::optional<std::pair<int, int>> worst_pair;
  double min_entry = 0.0;
  /// Largest |Σ τ_r − 1|.
  double max_mass_error = 0.0;
};

/// Default tolerance for accepting pseudomarginals as inputs.
inline constexpr double kAcceptTolerance = 1e-6;

/// Checks membership in the local polytope: every containment pair is
/// consistent, entries are >= -tol and each table has unit mass.
ConsistencyReport validate_local_polytope(const RegionGraph& graph, const Pseudomarginals& tau,
                                          double tol = kAcceptTolerance);

/// H(τ; ρ) = Σ_r ρ_r H_r(τ_r).
double kikuchi_entropy(const RegionGraph& graph, const Pseudomarginals& tau,
                       const WeightVector& rho);

/// ⟨θ, τ⟩ = Σ_r Σ_{x_r} θ_r(x_r) τ_r(x_r).
double inner_product(const LogPotentials& theta, const Pseudomarginals& tau);

/// B_{θ,ρ}(τ). Throws InvalidPseudomarginals unless τ passes
/// validate_local_polytope at kAcceptTolerance.
ObjectiveValue kikuchi_objective(const RegionGraph& graph, const LogPotentials& theta,
                                 const WeightVector& rho, const Pseudomarginals& tau);

/// ⟨θ, τ⟩ + H(τ; ρ) without the local-polytope check, for iterates that
/// are normalized but not yet consistent.
ObjectiveValue objective_terms(const RegionGraph& graph, const LogPotentials& theta,
                               const WeightVector& rho, const Pseudomarginals& tau);

struct BetheEntropyForms {
  /// Σ_s ρ_s H_s + Σ_α ρ_α H_α.
  double plain = 0.0;
  /// Σ_s ρ'_s H_s − Σ_α ρ_α Ĩ_α with ρ'_s = ρ_s + Σ_{α∋s} ρ_α, where Ĩ_α is
  /// evaluated as KL(τ_α ‖ Π_{s∈α} τ_s).
  double mi_form = 0.0;
  /// Σ_s (1 − Σ_{α∋s} ρ_α) H_s + Σ_α ρ_α H_α, present only when ρ'_s = 1
  /// for every vertex.
  std::optional<double> ones_form;
};

/// Vertices that appear in a factor but have no singleton region use the
/// factor's marginal and weight zero.
BetheEntropyForms bethe_entropy_forms(const TwoLayerView& view, const Pseudomarginals& tau,
                                      const WeightVector& rho);

struct ExactOptions {
  /// Largest number of joint assignments the brute-force oracle accepts.
  std::size_t max_states = std::size_t{1} << 26;
  /// Worker threads; the result does not depend on this value.
  int threads = 1;
};

struct ExactResult {
  double log_partition = 0.0;
  double entropy = 0.0;
  Pseudomarginals marginals;
};

/// Brute-force enumeration of every joint assignment. The assignment range
/// is cut into fixed-size chunks whose partial log-sum-exp results are
/// merged in chunk order. Throws TooLarge past opts.max_states.
ExactResult exact_inference(const RegionGraph& graph, const LogPotentials& theta,
                            const ExactOptions& opts = {});

double exact_log_partition(const RegionGraph& graph, const LogPotentials& theta,
                           const ExactOptions& opts = {});
Pseudomarginals exact_marginals(const RegionGraph& graph, const LogPotentials& theta,
                                const ExactOptions& opts = {});
double exact_entropy(const RegionGraph& graph, const LogPotentials& theta,
                     const ExactOptions& opts = {});

/// θ for the region graph produced by from_ising: θ_s(x) = γ_s x and
/// θ_st(x_s, x_t) = γ_st x_s x_t with spins x = 2 * index - 1.
LogPotentials ising_log_potentials(const IsingModel& model);

/// Weights for pairwise_region_graph(graph): ρ_st from `edge_weights` and
/// ρ_s = 1 − Σ_{t ∈ N(s)} ρ_st.
WeightVector bethe_weights(const SimpleGraph& graph, const std::vector<double>& edge_weights);

}  // namespace kikuchi

#endif  // KIKUCHI_OBJECTIVE_HPP
