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

#include "kikuchi/region_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "kikuchi/errors.hpp"

namespace kikuchi {

RegionGraph RegionGraph::build(int num_vertices, int domain_size,
                               std::vector<std::vector<int>> regions) {
  if (num_vertices < 1)
    throw Error(ErrorKind::VertexOutOfRange, "region graph needs at least one vertex");
  return build(std::vector<int>(num_vertices, domain_size), std::move(regions));
}

RegionGraph RegionGraph::build(std::vector<int> domain_sizes,
                               std::vector<std::vector<int>> regions) {
  const int n = static_cast<int>(domain_sizes.size());
  if (n < 1) throw Error(ErrorKind::VertexOutOfRange, "region graph needs at least one vertex");
  for (int d : domain_sizes)
    if (d < 2) throw Error(ErrorKind::InvalidModel, "domain sizes must be >= 2");

  std::set<std::vector<int>> seen;
  for (auto& region : regions) {
    if (region.empty()) throw Error(ErrorKind::EmptyRegion, "regions must be nonempty");
    std::sort(region.begin(), region.end());
    if (std::adjacent_find(region.begin(), region.end()) != region.end())
      throw Error(ErrorKind::DuplicateRegion, "region lists a vertex twice");
    if (region.front() < 0 || region.back() >= n)
      throw Error(ErrorKind::VertexOutOfRange,
                  "vertex " + std::to_string(region.front() < 0 ? region.front() : region.back()) +
                      " outside 0.." + std::to_string(n - 1));
    if (!seen.insert(region).second)
      throw Error(ErrorKind::DuplicateRegion, "regions must be distinct");
  }

  RegionGraph g;
  g.domain_sizes_ = std::move(domain_sizes);
  g.regions_ = std::move(regions);
  const int m = g.num_regions();

  g.contains_.assign(static_cast<size_t>(m) * m, 0);
  for (int u = 0; u < m; ++u)
    for (int t = 0; t < m; ++t)
      g.contains_[u * m + t] = std::includes(g.regions_[u].begin(), g.regions_[u].end(),
                                             g.regions_[t].begin(), g.regions_[t].end());

  // Transitive reduction of strict containment.
  auto strict = [&](int u, int t) { return u != t && g.contains(u, t); };
  g.parents_.assign(m, {});
  g.children_.assign(m, {});
  for (int p = 0; p < m; ++p) {
    for (int c = 0; c < m; ++c) {
      if (!strict(p, c)) continue;
      bool direct = true;
      for (int t = 0; t < m && direct; ++t)
        if (strict(p, t) && strict(t, c)) direct = false;
      if (direct) {
        g.hasse_.emplace_back(p, c);
        g.children_[p].push_back(c);
        g.parents_[c].push_back(p);
      }
    }
  }
  return g;
}

std::size_t RegionGraph::table_size(int r) const {
  std::size_t size = 1;
  for (int v : regions_[r]) size *= static_cast<std::size_t>(domain_sizes_[v]);
  return size;
}

std::vector<int> RegionGraph::ancestors(int r) const {
  std::vector<int> out;
  for (int s = 0; s < num_regions(); ++s)
    if (s != r && contains(s, r)) out.push_back(s);
  return out;
}

std::vector<int> RegionGraph::forebears(int r) const {
  std::vector<int> out;
  for (int s = 0; s < num_regions(); ++s)
    if (contains(s, r)) out.push_back(s);
  return out;
}

std::vector<int> RegionGraph::neighbors(int r) const {
  std::vector<int> out;
  for (int s = 0; s < num_regions(); ++s)
    if (contains(s, r) || contains(r, s)) out.push_back(s);
  return out;
}

std::vector<std::pair<int, int>> RegionGraph::strict_containments() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < num_regions(); ++u)
    for (int t = 0; t < num_regions(); ++t)
      if (u != t && contains(u, t)) out.emplace_back(u, t);
  return out;
}

std::optional<int> RegionGraph::find_region(std::vector<int> vertices) const {
  std::sort(vertices.begin(), vertices.end());
  for (int r = 0; r < num_regions(); ++r)
    if (regions_[r] == vertices) return r;
  return std::nullopt;
}

std::vector<double> overcounting_numbers(const RegionGraph& graph) {
  const int m = graph.num_regions();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  // Every ancestor is strictly larger, so decreasing size is a valid
  // top-down order.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return graph.region(a).size() > graph.region(b).size();
  });
  std::vector<double> c(m, 0.0);
  for (int r : order) {
    double sum = 0.0;
    for (int s : graph.ancestors(r)) sum += c[s];
    c[r] = 1.0 - sum;
  }
  return c;
}

TwoLayerView two_layer_view(const RegionGraph& graph) {
  for (const auto& [u, t] : graph.strict_containments()) {
    if (graph.region(t).size() > 1)
      throw Error(ErrorKind::NotTwoLayer,
                  "region " + std::to_string(t) + " of size " +
                      std::to_string(graph.region(t).size()) + " lies inside region " +
                      std::to_string(u));
  }
  TwoLayerView view;
  view.num_vertices = graph.num_vertices();
  view.singleton_region.assign(view.num_vertices, -1);
  view.factors_of_vertex.assign(view.num_vertices, {});
  for (int r = 0; r < graph.num_regions(); ++r) {
    const auto& reg = graph.region(r);
    if (reg.size() == 1) {
      view.singleton_region[reg[0]] = r;
    } else {
      int pos = view.num_factors();
      view.factor_regions.push_back(r);
      view.factor_members.push_back(reg);
      for (int v : reg) view.factors_of_vertex[v].push_back(pos);
    }
  }
  for (int v = 0; v < view.num_vertices; ++v)
    if (view.singleton_region[v] >= 0) view.vertices.push_back(v);
  return view;
}

RegionGraph pairwise_region_graph(const SimpleGraph& graph) {
  std::vector<std::vector<int>> regions;
  regions.reserve(graph.num_vertices + graph.edges.size());
  for (int v = 0; v < graph.num_vertices; ++v) regions.push_back({v});
  for (const auto& [s, t] : graph.edges) regions.push_back({s, t});
  return RegionGraph::build(graph.num_vertices, 2, std::move(regions));
}

RegionGraph from_ising(const IsingModel& model) {
  return pairwise_region_graph(model.graph);
}

}  // namespace kikuchi
