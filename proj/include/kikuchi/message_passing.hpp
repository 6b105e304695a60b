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

#ifndef KIKUCHI_MESSAGE_PASSING_HPP
#define KIKUCHI_MESSAGE_PASSING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "kikuchi/models.hpp"
#include "kikuchi/objective.hpp"
#include "kikuchi/region_graph.hpp"
#include "kikuchi/tables.hpp"

namespace kikuchi {

/// Log-domain messages, one table per directed edge (from, to) over the
/// scope of `to`. Each exponentiated table sums to one.
///
/// For the generalized solver the edges are the Hasse edges (parent, child)
/// and the indices are regions; for the pairwise solver they are directed
/// graph edges (t, s) between vertices, stored in the order 2e: a → b and
/// 2e + 1: b → a for edge e = (a, b).
struct MessageSet {
  std::vector<std::pair<int, int>> edges;
  std::vector<FactorTable> log_messages;

  std::size_t size() const { return edges.size(); }
};

enum class Schedule { Parallel, Sequential };
enum class InitKind { Uniform, Random };

struct SolverOptions {
  /// Fraction of the old log-message kept at each update.
  double damping = 0.5;
  /// Convergence threshold on Δ, the mean absolute change of the
  /// (exponentiated) messages in one iteration.
  double tol = 1e-10;
  int max_iters = 2500;
  Schedule schedule = Schedule::Parallel;
  InitKind init = InitKind::Uniform;
  /// Random init: log-messages i.i.d. U[-1, 1] before normalization.
  std::uint64_t seed = 0;
};

struct SolverResult {
  MessageSet messages;
  Pseudomarginals tau;
  ObjectiveValue objective;
  double delta_final = 0.0;
  std::vector<double> delta_history;
  int iterations = 0;
  bool converged = false;
};

/// Generalized reweighted sum-product on the Hasse diagram of `graph`.
/// Requires |ρ_r| >= 1e-9 and |ρ_r + ρ_s| >= 1e-9 on every Hasse edge
/// (InvalidWeights). Throws NonFiniteMessage on numeric blowup, including a
/// normalized log-message entry below -700 or one still drifting in the log
/// domain when Δ has already dropped below tol at the last iteration.
SolverResult run_kikuchi_rsp(const RegionGraph& graph, const LogPotentials& theta,
                             const WeightVector& rho, const SolverOptions& opts = {});

/// Pairwise reweighted sum-product on an Ising model with edge weights ρ_st.
/// τ is laid out like from_ising(model) and the objective uses
/// bethe_weights(model.graph, rho_edges).
SolverResult run_pairwise_rsp(const IsingModel& model, const std::vector<double>& rho_edges,
                              const SolverOptions& opts = {});

/// Largest absolute violation of the fixed-point conditions: local
/// consistency of τ, agreement of τ with the pseudomarginals rebuilt from
/// the messages, and the projection of the Lagrangian gradient
/// θ_r - ρ_r (log τ_r + 1) onto the tangent space of the local polytope.
double stationarity_residual(const RegionGraph& graph, const LogPotentials& theta,
                             const WeightVector& rho, const MessageSet& messages,
                             const Pseudomarginals& tau);

double stationarity_residual(const IsingModel& model, const std::vector<double>& rho_edges,
                             const MessageSet& messages, const Pseudomarginals& tau);

/// Pseudomarginals rebuilt from generalized messages:
/// τ_r ∝ exp(θ_r/ρ_r) Π_{s∈P(r)} M_sr^{ρ_s/ρ_r} / Π_{t∈C(r)} M_rt.
Pseudomarginals beliefs_from_messages(const RegionGraph& graph, const LogPotentials& theta,
                                      const WeightVector& rho, const MessageSet& messages);

/// Pseudomarginals rebuilt from pairwise messages.
Pseudomarginals beliefs_from_messages(const IsingModel& model,
                                      const std::vector<double>& rho_edges,
                                      const MessageSet& messages);

struct PrunedProblem {
  RegionGraph graph;
  LogPotentials theta;
  WeightVector rho;
  /// Original index of every kept region.
  std::vector<int> kept;
};

/// Drops regions with |ρ_r| < eps, adding each dropped θ_r into the smallest
/// kept region containing it (lowest index among equals). Throws
/// InvalidWeights when a dropped region with nonzero θ has no kept superset.
PrunedProblem prune_zero_weight_regions(const RegionGraph& graph, const LogPotentials& theta,
                                        const WeightVector& rho, double eps = 1e-12);

}  // namespace kikuchi

#endif  // KIKUCHI_MESSAGE_PASSING_HPP
