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

#include "kikuchi/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kikuchi/errors.hpp"
#include "kikuchi/random.hpp"

namespace kikuchi {

std::vector<int> SimpleGraph::degrees() const {
  std::vector<int> deg(num_vertices, 0);
  for (const auto& [s, t] : edges) {
    ++deg[s];
    ++deg[t];
  }
  return deg;
}

SimpleGraph make_simple_graph(int num_vertices, std::vector<Edge> edges) {
  if (num_vertices < 1) throw Error(ErrorKind::InvalidModel, "graph needs at least one vertex");
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first < 0 || e.second >= num_vertices)
      throw Error(ErrorKind::InvalidModel, "edge endpoint out of range");
    if (e.first == e.second) throw Error(ErrorKind::InvalidModel, "self-loop");
  }
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorKind::InvalidModel, "repeated edge");
  return SimpleGraph{num_vertices, std::move(edges)};
}

void validate(const IsingModel& model) {
  const auto& g = model.graph;
  if (static_cast<int>(model.gamma_s.size()) != g.num_vertices)
    throw Error(ErrorKind::InvalidModel, "gamma_s must have one entry per vertex");
  if (model.gamma_st.size() != g.edges.size())
    throw Error(ErrorKind::InvalidModel, "gamma_st must have one entry per edge");
  for (double v : model.gamma_s)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidModel, "non-finite gamma_s");
  for (double v : model.gamma_st)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidModel, "non-finite gamma_st");
  make_simple_graph(g.num_vertices, g.edges);
}

SimpleGraph complete_graph(int n) {
  if (n < 2) throw Error(ErrorKind::TooSmall, "complete graph needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) edges.emplace_back(s, t);
  return SimpleGraph{n, std::move(edges)};
}

SimpleGraph torus_grid(int n) {
  int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (n < 1 || side * side != n)
    throw Error(ErrorKind::NotPerfectSquare, std::to_string(n) + " is not a perfect square");
  if (side < 3) throw Error(ErrorKind::TooSmall, "torus needs side length >= 3");
  std::vector<Edge> edges;
  edges.reserve(2 * static_cast<size_t>(n));
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      int v = i * side + j;
      int right = i * side + (j + 1) % side;
      int down = ((i + 1) % side) * side + j;
      edges.emplace_back(std::min(v, right), std::max(v, right));
      edges.emplace_back(std::min(v, down), std::max(v, down));
    }
  }
  std::sort(edges.begin(), edges.end());
  return make_simple_graph(n, std::move(edges));
}

IsingModel sample_ising(const SimpleGraph& graph, const IsingSampling& opts) {
  if (!(opts.omega_s > 0) || !(opts.omega_st > 0))
    throw Error(ErrorKind::InvalidModel, "omega_s and omega_st must be positive");
  Rng rng(opts.seed);
  IsingModel model;
  model.graph = graph;
  model.gamma_s.resize(graph.num_vertices);
  for (auto& g : model.gamma_s) g = rng.uniform(0.0, opts.omega_s);
  model.gamma_st.resize(graph.edges.size());
  double lo = opts.kind == CouplingKind::Attractive ? 0.0 : -opts.omega_st;
  for (auto& g : model.gamma_st) g = rng.uniform(lo, opts.omega_st);
  return model;
}

}  // namespace kikuchi
