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

#ifndef KIKUCHI_MODELS_HPP
#define KIKUCHI_MODELS_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace kikuchi {

/// Undirected edge, stored with first < second.
using Edge = std::pair<int, int>;

/// Simple undirected graph on vertices 0..num_vertices-1.
struct SimpleGraph {
  int num_vertices = 0;
  std::vector<Edge> edges;

  std::vector<int> degrees() const;
};

/// Throws InvalidModel unless the graph is simple (no loops, no repeated
/// edges, endpoints in range). Normalizes each edge to (min, max).
SimpleGraph make_simple_graph(int num_vertices, std::vector<Edge> edges);

/// Binary pairwise model p(x) ∝ exp(Σ γ_s x_s + Σ γ_st x_s x_t) with
/// x_s ∈ {-1, +1}. In tables, state index 0 is the spin -1 and index 1 is +1.
struct IsingModel {
  SimpleGraph graph;
  std::vector<double> gamma_s;   // one per vertex
  std::vector<double> gamma_st;  // one per edge, aligned with graph.edges
};

/// Checks sizes and finiteness of the potentials; throws InvalidModel.
void validate(const IsingModel& model);

SimpleGraph complete_graph(int n);

/// sqrt(n) x sqrt(n) grid with wrap-around in both directions. Every vertex
/// has degree four. Requires sqrt(n) >= 3; a 2x2 torus would repeat edges.
SimpleGraph torus_grid(int n);

enum class CouplingKind { Attractive, Mixed };

struct IsingSampling {
  CouplingKind kind = CouplingKind::Mixed;
  double omega_s = 0.1;
  double omega_st = 2.0;
  std::uint64_t seed = 0;
};

/// γ_s ~ U[0, ω_s]; γ_st ~ U[0, ω_st] (attractive) or U[-ω_st, ω_st]
/// (mixed). Draws are taken for vertices in ascending order, then for edges
/// in list order.
IsingModel sample_ising(const SimpleGraph& graph, const IsingSampling& opts);

}  // namespace kikuchi

#endif  // KIKUCHI_MODELS_HPP
