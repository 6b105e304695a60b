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

#include "kikuchi/concavity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include <Eigen/Dense>

#include "kikuchi/errors.hpp"
#include "kikuchi/random.hpp"
#include "kikuchi/tangent_space.hpp"

namespace kikuchi {

namespace {

void require_region_weights(int regions, const WeightVector& rho) {
  if (static_cast<int>(rho.size()) != regions)
    throw Error(ErrorKind::InvalidWeights, "weight vector needs one entry per region");
}

// Sum of weights over the set bits of a mask, via two half-width tables.
class MaskSummer {
 public:
  explicit MaskSummer(const std::vector<double>& w) : low_bits_(static_cast<int>(w.size()) / 2) {
    const int high_bits = static_cast<int>(w.size()) - low_bits_;
    low_.assign(std::size_t{1} << low_bits_, 0.0);
    high_.assign(std::size_t{1} << high_bits, 0.0);
    for (std::size_t m = 1; m < low_.size(); ++m) {
      int b = std::countr_zero(m);
      low_[m] = low_[m & (m - 1)] + w[b];
    }
    for (std::size_t m = 1; m < high_.size(); ++m) {
      int b = std::countr_zero(m);
      high_[m] = high_[m & (m - 1)] + w[low_bits_ + b];
    }
  }

  double operator()(std::uint32_t mask) const {
    return low_[mask & ((1u << low_bits_) - 1)] + high_[mask >> low_bits_];
  }

 private:
  int low_bits_;
  std::vector<double> low_, high_;
};

ConcavityReport finish(double min_value, std::vector<int> argmin) {
  ConcavityReport rep;
  rep.min_value = min_value;
  rep.satisfied = min_value >= 0.0;
  if (!rep.satisfied) rep.violating_set = std::move(argmin);
  return rep;
}

}  // namespace

ConcavityReport check_bethe_concavity(const TwoLayerView& view, const WeightVector& rho,
                                      const ConcavityOptions& opts) {
  double worst_factor = 0.0;
  int worst_factor_region = -1;
  for (int r : view.factor_regions) {
    if (static_cast<std::size_t>(r) >= rho.size())
      throw Error(ErrorKind::InvalidWeights, "weight vector too short for the view");
    if (rho[r] < worst_factor) {
      worst_factor = rho[r];
      worst_factor_region = r;
    }
  }
  if (worst_factor_region >= 0) return finish(worst_factor, {worst_factor_region});

  const int nv = static_cast<int>(view.vertices.size());
  if (nv > opts.max_exhaustive || nv > 30)
    throw Error(ErrorKind::TooManyVertices,
                std::to_string(nv) + " vertices exceed the exhaustive cap");
  std::vector<int> position(view.num_vertices, -1);
  for (int i = 0; i < nv; ++i) position[view.vertices[i]] = i;
  std::vector<double> vertex_weight(nv);
  for (int i = 0; i < nv; ++i) vertex_weight[i] = rho[view.singleton_region[view.vertices[i]]];
  std::vector<std::uint32_t> factor_mask(view.num_factors(), 0);
  std::vector<double> factor_weight(view.num_factors());
  for (int f = 0; f < view.num_factors(); ++f) {
    factor_weight[f] = rho[view.factor_regions[f]];
    for (int v : view.factor_members[f])
      if (position[v] >= 0) factor_mask[f] |= 1u << position[v];
  }
  MaskSummer vertex_sum(vertex_weight);

  double best = 0.0;
  std::uint32_t best_mask = 0;
  const std::uint32_t limit = nv == 32 ? 0 : (1u << nv);
  for (std::uint32_t u = 1; u < limit; ++u) {
    double value = vertex_sum(u);
    for (int f = 0; f < view.num_factors(); ++f)
      if (factor_mask[f] & u) value += factor_weight[f];
    if (value < best) {
      best = value;
      best_mask = u;
    }
  }
  std::vector<int> set;
  for (int i = 0; i < nv; ++i)
    if (best_mask >> i & 1u) set.push_back(view.singleton_region[view.vertices[i]]);
  return finish(best, std::move(set));
}

ConcavityReport check_kikuchi_concavity(const RegionGraph& graph, const WeightVector& rho,
                                        const ConcavityOptions& opts) {
  require_region_weights(graph.num_regions(), rho);
  std::optional<TwoLayerView> view;
  try {
    view = two_layer_view(graph);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotTwoLayer) throw;
  }
  if (view) return check_bethe_concavity(*view, rho, opts);

  const int m = graph.num_regions();
  if (m > opts.max_exhaustive || m > 30)
    throw Error(ErrorKind::TooManyRegions,
                std::to_string(m) + " regions exceed the exhaustive cap");
  std::vector<std::uint32_t> forebear(m, 0);
  for (int r = 0; r < m; ++r)
    for (int s : graph.forebears(r)) forebear[r] |= 1u << s;
  MaskSummer sum(rho.values);

  double best = 0.0;
  std::uint32_t best_set = 0;
  // Depth-first over inclusion decisions; the union ℱ(S) is carried down.
  std::function<void(int, std::uint32_t, std::uint32_t)> visit =
      [&](int i, std::uint32_t chosen, std::uint32_t closure) {
        if (i == m) {
          if (chosen == 0) return;
          double value = sum(closure);
          if (value < best) {
            best = value;
            best_set = chosen;
          }
          return;
        }
        visit(i + 1, chosen, closure);
        visit(i + 1, chosen | (1u << i), closure | forebear[i]);
      };
  visit(0, 0, 0);
  std::vector<int> set;
  for (int r = 0; r < m; ++r)
    if (best_set >> r & 1u) set.push_back(r);
  return finish(best, std::move(set));
}

// ---------------------------------------------------------------------------

namespace {

// Dinic max-flow on real capacities.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adj_(nodes), level_(nodes), next_(nodes) {}

  int add_edge(int from, int to, double cap) {
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0.0});
    return static_cast<int>(arcs_.size()) - 2;
  }

  double max_flow(int source, int sink) {
    double total = 0.0;
    while (bfs(source, sink)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (double pushed = dfs(source, sink, std::numeric_limits<double>::infinity()))
        total += pushed;
    }
    return total;
  }

  double flow_on(int arc) const { return arcs_[arc ^ 1].cap; }

  /// Nodes reachable from source in the residual network.
  std::vector<char> source_side(int source) const {
    std::vector<char> seen(adj_.size(), 0);
    std::queue<int> q;
    q.push(source);
    seen[source] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a : adj_[v])
        if (arcs_[a].cap > kEps && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          q.push(arcs_[a].to);
        }
    }
    return seen;
  }

 private:
  static constexpr double kEps = 1e-12;
  struct Arc {
    int to;
    double cap;
  };

  bool bfs(int source, int sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[source] = 0;
    q.push(source);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a : adj_[v])
        if (arcs_[a].cap > kEps && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[v] + 1;
          q.push(arcs_[a].to);
        }
    }
    return level_[sink] >= 0;
  }

  double dfs(int v, int sink, double limit) {
    if (v == sink) return limit;
    for (int& i = next_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      int a = adj_[v][i];
      Arc& arc = arcs_[a];
      if (arc.cap <= kEps || level_[arc.to] != level_[v] + 1) continue;
      double pushed = dfs(arc.to, sink, std::min(limit, arc.cap));
      if (pushed > 0.0) {
        arc.cap -= pushed;
        arcs_[a ^ 1].cap += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> next_;
};

}  // namespace

EdgeLabeling hall_labeling(const std::vector<double>& left_weights,
                           const std::vector<double>& right_weights,
                           const std::vector<BipartiteEdge>& edges) {
  const int nl = static_cast<int>(left_weights.size());
  const int nr = static_cast<int>(right_weights.size());
  for (double w : left_weights)
    if (!(w > 0)) throw Error(ErrorKind::NonPositiveWeight, "Hall weights must be positive");
  for (double w : right_weights)
    if (!(w > 0)) throw Error(ErrorKind::NonPositiveWeight, "Hall weights must be positive");

  const int source = nl + nr, sink = nl + nr + 1;
  FlowNetwork net(nl + nr + 2);
  double demand = 0.0;
  for (int s = 0; s < nl; ++s) {
    net.add_edge(source, s, left_weights[s]);
    demand += left_weights[s];
  }
  for (int t = 0; t < nr; ++t) net.add_edge(nl + t, sink, right_weights[t]);
  std::vector<int> arc_of(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& [s, t] = edges[e];
    if (s < 0 || s >= nl || t < 0 || t >= nr)
      throw Error(ErrorKind::VertexOutOfRange, "bipartite edge endpoint out of range");
    arc_of[e] = net.add_edge(s, nl + t, std::numeric_limits<double>::infinity());
  }

  double flow = net.max_flow(source, sink);
  if (flow < demand - 1e-9 * std::max(1.0, demand)) {
    auto side = net.source_side(source);
    std::vector<int> subset;
    for (int s = 0; s < nl; ++s)
      if (side[s]) subset.push_back(s);
    throw HallConditionViolated(std::move(subset));
  }

  EdgeLabeling out;
  out.labels.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) out.labels[e] = std::max(0.0, net.flow_on(arc_of[e]));
  return out;
}

HallInstance kikuchi_hall_instance(const RegionGraph& graph, const WeightVector& rho) {
  require_region_weights(graph.num_regions(), rho);
  HallInstance inst;
  std::vector<int> right_pos(graph.num_regions(), -1);
  for (int r = 0; r < graph.num_regions(); ++r) {
    if (rho[r] < 0) {
      inst.left_regions.push_back(r);
      inst.left_weights.push_back(-rho[r]);
    } else if (rho[r] > 0) {
      right_pos[r] = static_cast<int>(inst.right_regions.size());
      inst.right_regions.push_back(r);
      inst.right_weights.push_back(rho[r]);
    }
  }
  for (int i = 0; i < static_cast<int>(inst.left_regions.size()); ++i) {
    int s = inst.left_regions[i];
    for (int t : graph.ancestors(s))
      if (right_pos[t] >= 0) inst.edges.push_back({i, right_pos[t]});
  }
  return inst;
}

// ---------------------------------------------------------------------------

namespace {

double neg_p_log_p(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

// Σ_r ρ_r Σ_x [f(τ + h d) − 2 f(τ) + f(τ − h d)] / h², f(p) = −p log p,
// accumulated entry by entry to limit cancellation.
double second_difference(const Eigen::VectorXd& tau, const Eigen::VectorXd& dir,
                         const Eigen::VectorXd& weight, double h) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < tau.size(); ++i) {
    if (weight(i) == 0.0) continue;
    double p = tau(i), d = h * dir(i);
    acc += weight(i) * (neg_p_log_p(p + d) - 2.0 * neg_p_log_p(p) + neg_p_log_p(p - d));
  }
  return acc / (h * h);
}

}  // namespace

ProbeResult hessian_probe(const RegionGraph& graph, const Pseudomarginals& tau,
                          const WeightVector& rho, const ProbeOptions& opts) {
  require_region_weights(graph.num_regions(), rho);
  for (const auto& t : tau.tables)
    for (double v : t.values)
      if (v < 10.0 * opts.step)
        throw Error(ErrorKind::BoundaryPoint, "probe point must be interior");

  TangentSpace space(graph);
  Eigen::VectorXd point = space.flatten(tau);
  Eigen::VectorXd weight(point.size());
  {
    Eigen::Index k = 0;
    for (int r = 0; r < graph.num_regions(); ++r)
      for (std::size_t i = 0; i < graph.table_size(r); ++i) weight(k++) = rho[r];
  }

  ProbeResult out;
  out.direction = space.unflatten(Eigen::VectorXd::Zero(point.size()), tau);
  const auto& basis = space.basis();
  if (basis.cols() == 0) return out;

  // Hessian of H(·; ρ) is diagonal: −ρ_r / τ_r(x).
  Eigen::VectorXd diag = -(weight.array() / point.array()).matrix();
  Eigen::MatrixXd restricted = basis.transpose() * diag.asDiagonal() * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(restricted);
  out.restricted_hessian_max = eig.eigenvalues()(eig.eigenvalues().size() - 1);

  std::vector<Eigen::VectorXd> dirs;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) dirs.push_back(basis.col(j));
  Rng rng(opts.seed);
  for (int k = 0; k < opts.random_directions; ++k) {
    Eigen::VectorXd c(basis.cols());
    for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = rng.uniform(-1.0, 1.0);
    dirs.push_back(basis * c.normalized());
  }
  dirs.push_back(basis * eig.eigenvectors().col(eig.eigenvectors().cols() - 1));

  out.max_curvature = -std::numeric_limits<double>::infinity();
  for (auto& d : dirs) {
    d.normalize();
    double c = second_difference(point, d, weight, opts.step);
    if (c > out.max_curvature) {
      out.max_curvature = c;
      out.direction = space.unflatten(d, tau);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct FamilyEntries {
  double all_plus, all_minus, mixed;
};

FamilyEntries family_entries(int k, SymmetricPoint q) {
  const double half = std::ldexp(1.0, k - 1);
  const double scale = std::ldexp(1.0, -k);
  return {scale * (1.0 + half * q.q1 + (half - 1.0) * q.q2),
          scale * (1.0 - half * q.q1 + (half - 1.0) * q.q2), scale * (1.0 - q.q2)};
}

void require_binary(const RegionGraph& graph) {
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (graph.domain_size(v) != 2)
      throw Error(ErrorKind::InvalidModel, "symmetric family needs binary variables");
}

}  // namespace

bool symmetric_point_feasible(const std::vector<int>& sizes, SymmetricPoint q, double margin) {
  for (int k : sizes) {
    auto e = family_entries(k, q);
    if (e.all_plus < margin || e.all_minus < margin) return false;
    if (k > 1 && e.mixed < margin) return false;
  }
  return true;
}

FactorTable symmetric_table(const std::vector<int>& scope, SymmetricPoint q) {
  const int k = static_cast<int>(scope.size());
  FactorTable t(scope, std::vector<int>(k, 2));
  auto e = family_entries(k, q);
  std::fill(t.values.begin(), t.values.end(), e.mixed);
  // State index 0 is spin −1, so entry 0 is all −1 and the last is all +1.
  t.values.front() = e.all_minus;
  t.values.back() = e.all_plus;
  return t;
}

Pseudomarginals symmetric_pseudomarginal(const RegionGraph& graph, SymmetricPoint q) {
  std::vector<int> all(graph.num_vertices());
  for (int v = 0; v < graph.num_vertices(); ++v) all[v] = v;
  return zeta_slice(graph, all, q);
}

Pseudomarginals zeta_slice(const RegionGraph& graph, const std::vector<int>& subset,
                           SymmetricPoint q) {
  require_binary(graph);
  two_layer_view(graph);
  std::vector<char> in(graph.num_vertices(), 0);
  for (int v : subset) in.at(v) = 1;

  std::vector<int> sizes;
  auto tau = region_tables(graph);
  for (int r = 0; r < graph.num_regions(); ++r) {
    std::vector<int> inside, outside;
    for (int v : graph.region(r)) (in[v] ? inside : outside).push_back(v);
    if (inside.empty()) {
      tau[r] = FactorTable::uniform(graph.region(r), std::vector<int>(graph.region(r).size(), 2));
      continue;
    }
    sizes.push_back(static_cast<int>(inside.size()));
    FactorTable t = symmetric_table(inside, q);
    if (!outside.empty())
      t = product(t, FactorTable::uniform(outside, std::vector<int>(outside.size(), 2)));
    tau[r] = std::move(t);
  }
  if (!symmetric_point_feasible(sizes, q))
    throw Error(ErrorKind::InfeasiblePoint, "symmetric point has a negative entry");
  return tau;
}

std::map<int, double> zeta_coefficients(const TwoLayerView& view, const WeightVector& rho,
                                        const std::vector<int>& subset) {
  std::vector<char> in(view.num_vertices, 0);
  for (int v : subset) in.at(v) = 1;
  std::map<int, double> c;
  c[1] = 0.0;
  for (int v : subset)
    if (view.singleton_region[v] >= 0) c[1] += rho[view.singleton_region[v]];
  for (int f = 0; f < view.num_factors(); ++f) {
    int k = 0;
    for (int v : view.factor_members[f]) k += in[v];
    if (k > 0) c[k] += rho[view.factor_regions[f]];
  }
  return c;
}

ZetaHessian zeta_hessian(const std::map<int, double>& c, double q2) {
  ZetaHessian h;
  for (const auto& [k, ck] : c) {
    if (k == 1) {
      h.d11 -= ck;
      continue;
    }
    const double half = std::ldexp(1.0, k - 1);
    const double denom = 1.0 + (half - 1.0) * q2;
    h.d11 -= half * ck / denom;
    h.d22 -= (half - 1.0) * ck / (denom * (1.0 - q2));
  }
  return h;
}

}  // namespace kikuchi
