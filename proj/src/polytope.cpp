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

#include "kikuchi/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "kikuchi/errors.hpp"
#include "kikuchi/random.hpp"

namespace kikuchi {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), nodes_(n, 1), edges_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void add_edge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      if (nodes_[a] < nodes_[b]) std::swap(a, b);
      parent_[b] = a;
      nodes_[a] += nodes_[b];
      edges_[a] += edges_[b];
    }
    ++edges_[a];
  }

  int nodes(int root) const { return nodes_[root]; }
  int edges(int root) const { return edges_[root]; }

 private:
  std::vector<int> parent_;
  std::vector<int> nodes_;
  std::vector<int> edges_;
};

// Incidence graph of the selected factors: variable v is node v, factor f is
// node num_vertices + f.
UnionFind incidence(const FactorGraph& graph, const EdgeSubset& subset) {
  UnionFind uf(graph.num_vertices + graph.num_factors());
  for (int f = 0; f < graph.num_factors(); ++f)
    if (subset[f])
      for (int v : graph.factors[f]) uf.add_edge(v, graph.num_vertices + f);
  return uf;
}

// Largest (edges - nodes) over components; <= 0 means single-cycle forest,
// <= -1 means forest. Untouched nodes are trees on their own.
int worst_excess(const FactorGraph& graph, const EdgeSubset& subset) {
  UnionFind uf = incidence(graph, subset);
  int worst = -1;
  for (int x = 0; x < graph.num_vertices + graph.num_factors(); ++x)
    if (uf.find(x) == x) worst = std::max(worst, uf.edges(x) - uf.nodes(x));
  return worst;
}

bool is_forest(const FactorGraph& graph, const EdgeSubset& subset) {
  return worst_excess(graph, subset) < 0;
}

void require_factor_count(const FactorGraph& graph, int cap) {
  if (graph.num_factors() > cap || graph.num_factors() > 30)
    throw Error(ErrorKind::TooManyFactors,
                std::to_string(graph.num_factors()) + " factors exceed the enumeration cap");
}

EdgeSubset from_mask(std::uint32_t mask, int m) {
  EdgeSubset s(m);
  for (int i = 0; i < m; ++i) s[i] = (mask >> i) & 1u;
  return s;
}

std::vector<std::uint32_t> scf_masks(const FactorGraph& graph, int cap) {
  require_factor_count(graph, cap);
  const int m = graph.num_factors();
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
    if (is_single_cycle_forest(graph, from_mask(mask, m))) out.push_back(mask);
  return out;
}

void require_simple_weights(const SimpleGraph& graph, const std::vector<double>& w) {
  if (w.size() != graph.edges.size())
    throw Error(ErrorKind::InvalidWeights, "need one weight per edge");
}

}  // namespace

FactorGraph factor_graph(const TwoLayerView& view) {
  return {view.num_vertices, view.factor_members};
}

FactorGraph factor_graph(const SimpleGraph& graph) {
  FactorGraph g;
  g.num_vertices = graph.num_vertices;
  for (const auto& [s, t] : graph.edges) g.factors.push_back({s, t});
  return g;
}

bool is_single_cycle_forest(const FactorGraph& graph, const EdgeSubset& subset) {
  if (static_cast<int>(subset.size()) != graph.num_factors())
    throw Error(ErrorKind::InvalidWeights, "subset length must equal the number of factors");
  return worst_excess(graph, subset) <= 0;
}

bool is_single_cycle_forest(const FactorGraph& graph) {
  return is_single_cycle_forest(graph, EdgeSubset(graph.num_factors(), 1));
}

PolytopeMembership in_concavity_polytope(const FactorGraph& graph, const FactorWeights& rho,
                                         int max_vertices) {
  const int n = graph.num_vertices;
  const int m = graph.num_factors();
  if (static_cast<int>(rho.size()) != m)
    throw Error(ErrorKind::InvalidWeights, "need one weight per factor");
  if (n > max_vertices || n > 30)
    throw Error(ErrorKind::TooManyVertices,
                std::to_string(n) + " vertices exceed the exhaustive cap");
  PolytopeMembership out;
  for (double r : rho)
    if (!(r >= 0.0 && r <= 1.0)) return out;

  std::vector<std::uint32_t> fmask(m, 0);
  for (int f = 0; f < m; ++f)
    for (int v : graph.factors[f]) fmask[f] |= 1u << v;

  constexpr double kSlack = 1e-12;
  double worst = 0.0;
  std::uint32_t worst_u = 0;
  for (std::uint32_t u = 1; u < (std::uint64_t{1} << n); ++u) {
    double lhs = 0.0;
    for (int f = 0; f < m; ++f) {
      int k = std::popcount(fmask[f] & u);
      if (k > 1) lhs += (k - 1) * rho[f];
    }
    double excess = lhs - std::popcount(u);
    if (excess <= kSlack) continue;
    bool better = excess > worst + kSlack ||
                  (excess > worst - kSlack && std::popcount(u) < std::popcount(worst_u));
    if (worst_u == 0 || better) {
      worst = excess;
      worst_u = u;
    }
  }
  out.member = worst_u == 0;
  if (!out.member) {
    out.violation = worst;
    std::vector<int> set;
    for (int v = 0; v < n; ++v)
      if (worst_u >> v & 1u) set.push_back(v);
    out.violating_U = std::move(set);
  }
  return out;
}

std::vector<EdgeSubset> enumerate_F(const FactorGraph& graph, int max_factors) {
  std::vector<EdgeSubset> out;
  for (auto mask : scf_masks(graph, max_factors)) out.push_back(from_mask(mask, graph.num_factors()));
  return out;
}

EdgeSubset greedy_single_cycle_forest(const FactorGraph& graph, const std::vector<int>& order) {
  EdgeSubset chosen(graph.num_factors(), 0);
  for (int f : order) {
    chosen.at(f) = 1;
    if (worst_excess(graph, chosen) > 0) chosen[f] = 0;
  }
  return chosen;
}

std::vector<FactorWeights> sample_conv_F(const FactorGraph& graph, int count, std::uint64_t seed) {
  const int m = graph.num_factors();
  Rng rng(seed);
  std::vector<FactorWeights> out;
  out.reserve(count);
  std::vector<int> order(m);
  for (int c = 0; c < count; ++c) {
    FactorWeights rho(m, 0.0);
    std::vector<double> coeff(m + 1);
    std::vector<EdgeSubset> forests;
    double total = 0.0;
    for (int j = 0; j <= m; ++j) {
      std::iota(order.begin(), order.end(), 0);
      for (int i = m - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
      forests.push_back(greedy_single_cycle_forest(graph, order));
      // Dirichlet(1) via normalized exponentials; 1 - u keeps log away from 0.
      coeff[j] = -std::log(1.0 - rng.uniform());
      total += coeff[j];
    }
    for (int j = 0; j <= m; ++j)
      for (int f = 0; f < m; ++f)
        if (forests[j][f]) rho[f] += coeff[j] / total;
    for (double& r : rho) r = std::min(r, 1.0);
    out.push_back(std::move(rho));
  }
  return out;
}

WeightedForest max_weight_single_cycle_forest(const SimpleGraph& graph,
                                              const std::vector<double>& weights) {
  require_simple_weights(graph, weights);
  for (double w : weights)
    if (!(w > 0.0)) throw Error(ErrorKind::NonPositiveWeight, "edge weights must be positive");
  std::vector<int> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[a] > weights[b]; });

  // Bicircular independence: a component may absorb edges until it holds
  // as many edges as vertices.
  UnionFind uf(graph.num_vertices);
  WeightedForest out;
  out.subset.assign(weights.size(), 0);
  for (int e : order) {
    auto [s, t] = graph.edges[e];
    int a = uf.find(s), b = uf.find(t);
    bool ok = a == b ? uf.edges(a) < uf.nodes(a)
                     : uf.edges(a) + uf.edges(b) < uf.nodes(a) + uf.nodes(b);
    if (!ok) continue;
    uf.add_edge(s, t);
    out.subset[e] = 1;
    out.value += weights[e];
  }
  return out;
}

double lp_upper_bound(const SimpleGraph& graph, const std::vector<double>& weights) {
  require_simple_weights(graph, weights);
  int top = 0;
  for (double w : weights) {
    if (!(w >= 1.0) || w != std::floor(w) || w > 1e9)
      throw Error(ErrorKind::NonIntegerWeight, "weights must be positive integers");
    top = std::max(top, static_cast<int>(w));
  }
  double bound = 0.0;
  for (int level = 1; level <= top; ++level) {
    UnionFind uf(graph.num_vertices);
    std::vector<char> touched(graph.num_vertices, 0);
    for (std::size_t e = 0; e < weights.size(); ++e)
      if (weights[e] >= level) {
        uf.add_edge(graph.edges[e].first, graph.edges[e].second);
        touched[graph.edges[e].first] = touched[graph.edges[e].second] = 1;
      }
    int vertices = 0, trees = 0;
    for (int v = 0; v < graph.num_vertices; ++v) {
      if (!touched[v]) continue;
      ++vertices;
      int r = uf.find(v);
      if (r == v && uf.edges(r) == uf.nodes(r) - 1) ++trees;
    }
    // A root may be untouched only if isolated, so trees are counted once.
    bound += vertices - trees;
  }
  return bound;
}

Thresholds uniform_weight_thresholds(GraphFamily family, int n) {
  if (family == GraphFamily::Complete) {
    if (n < 3) throw Error(ErrorKind::BadFamilyParameter, "complete graph needs n >= 3");
    return {2.0 / n, 2.0 / (n - 1)};
  }
  int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (n < 9 || side * side != n)
    throw Error(ErrorKind::BadFamilyParameter, "torus needs a perfect square n >= 9");
  return {(n - 1) / (2.0 * n), 0.5};
}

Thresholds uniform_weight_thresholds(const SimpleGraph& graph, int max_vertices) {
  const int n = graph.num_vertices;
  if (graph.edges.empty()) throw Error(ErrorKind::BadFamilyParameter, "graph has no edges");
  if (n > max_vertices || n > 30)
    throw Error(ErrorKind::TooManyVertices,
                std::to_string(n) + " vertices exceed the exhaustive cap");
  Thresholds out{std::numeric_limits<double>::infinity(), 1.0};
  for (std::uint32_t u = 1; u < (std::uint64_t{1} << n); ++u) {
    int inside = 0;
    for (const auto& [s, t] : graph.edges)
      if ((u >> s & 1u) && (u >> t & 1u)) ++inside;
    if (inside == 0) continue;
    int size = std::popcount(u);
    out.rho_tree = std::min(out.rho_tree, (size - 1.0) / inside);
    out.rho_cycle = std::min(out.rho_cycle, static_cast<double>(size) / inside);
  }
  return out;
}

HullDistance hull_distance(const std::vector<std::vector<double>>& points,
                           const std::vector<double>& target) {
  if (points.empty()) throw Error(ErrorKind::InvalidWeights, "hull of no points");
  const int d = static_cast<int>(target.size());
  const int np = static_cast<int>(points.size());
  Eigen::MatrixXd q(d, np);
  for (int i = 0; i < np; ++i) {
    if (static_cast<int>(points[i].size()) != d)
      throw Error(ErrorKind::InvalidWeights, "point dimension mismatch");
    for (int k = 0; k < d; ++k) q(k, i) = points[i][k] - target[k];
  }
  const double scale = std::max(1.0, q.colwise().squaredNorm().maxCoeff());
  constexpr double kEps = 1e-12;

  std::vector<int> active;
  std::vector<double> lambda;
  {
    Eigen::Index best;
    q.colwise().squaredNorm().minCoeff(&best);
    active = {static_cast<int>(best)};
    lambda = {1.0};
  }
  auto point_of = [&](const std::vector<double>& w) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    for (std::size_t j = 0; j < active.size(); ++j) x += w[j] * q.col(active[j]);
    return x;
  };

  Eigen::VectorXd x = point_of(lambda);
  for (int major = 0; major < 10 * np + 100; ++major) {
    Eigen::Index entering;
    double lowest = (x.transpose() * q).minCoeff(&entering);
    if (x.squaredNorm() - lowest <= kEps * scale) break;
    if (std::find(active.begin(), active.end(), entering) != active.end()) break;
    active.push_back(static_cast<int>(entering));
    lambda.push_back(0.0);

    for (int minor = 0; minor < np + 10; ++minor) {
      const int k = static_cast<int>(active.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) kkt(a, b) = q.col(active[a]).dot(q.col(active[b]));
      kkt.block(0, k, k, 1).setOnes();
      kkt.block(k, 0, 1, k).setOnes();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs(k) = 1.0;
      Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      std::vector<double> mu(sol.data(), sol.data() + k);

      if (std::all_of(mu.begin(), mu.end(), [](double v) { return v > kEps; })) {
        lambda = mu;
        break;
      }
      double step = 1.0;
      for (int j = 0; j < k; ++j)
        if (mu[j] <= kEps) step = std::min(step, lambda[j] / (lambda[j] - mu[j]));
      for (int j = 0; j < k; ++j) lambda[j] += step * (mu[j] - lambda[j]);
      std::vector<int> keep_idx;
      std::vector<double> keep_w;
      for (int j = 0; j < k; ++j)
        if (lambda[j] > kEps) {
          keep_idx.push_back(active[j]);
          keep_w.push_back(lambda[j]);
        }
      active = std::move(keep_idx);
      lambda = std::move(keep_w);
      double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
      for (double& w : lambda) w /= total;
    }
    x = point_of(lambda);
  }

  HullDistance out;
  out.distance = x.norm();
  out.coefficients.assign(np, 0.0);
  for (std::size_t j = 0; j < active.size(); ++j) out.coefficients[active[j]] = lambda[j];
  out.direction.assign(x.data(), x.data() + d);
  out.separation = (x.transpose() * q).minCoeff();
  return out;
}

ConvMembership in_conv_F(const FactorGraph& graph, const FactorWeights& rho, int max_factors) {
  if (static_cast<int>(rho.size()) != graph.num_factors())
    throw Error(ErrorKind::InvalidWeights, "need one weight per factor");
  ConvMembership out;
  out.vertices = enumerate_F(graph, max_factors);
  std::vector<std::vector<double>> pts;
  for (const auto& s : out.vertices) pts.emplace_back(s.begin(), s.end());
  out.detail = hull_distance(pts, rho);
  out.member = out.detail.distance <= kHullTolerance;
  out.certified = !out.member && out.detail.separation > 0.0;
  return out;
}

std::vector<EdgeSubset> maximal_single_cycle_forests(const FactorGraph& graph, int max_factors) {
  auto masks = scf_masks(graph, max_factors);
  std::vector<char> in(std::size_t{1} << graph.num_factors(), 0);
  for (auto m : masks) in[m] = 1;
  std::vector<EdgeSubset> out;
  for (auto m : masks) {
    bool maximal = true;
    for (int f = 0; f < graph.num_factors() && maximal; ++f)
      if (!(m >> f & 1u) && in[m | (1u << f)]) maximal = false;
    if (maximal) out.push_back(from_mask(m, graph.num_factors()));
  }
  return out;
}

std::optional<Proposition1Witness> proposition1_witness(const FactorGraph& graph,
                                                        int max_factors) {
  if (is_single_cycle_forest(graph)) return std::nullopt;
  for (const auto& base : maximal_single_cycle_forests(graph, max_factors)) {
    if (!is_forest(graph, base)) continue;
    Proposition1Witness w;
    w.base = base;
    for (int f = 0; f < graph.num_factors(); ++f)
      if (!base[f]) {
        w.extra = f;
        break;
      }
    w.rho.assign(base.begin(), base.end());
    w.rho[w.extra] = 1.0 / (graph.factors[w.extra].size() - 1.0);
    return w;
  }
  return std::nullopt;
}

}  // namespace kikuchi
