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

#include "kikuchi/message_passing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kikuchi/errors.hpp"
#include "kikuchi/random.hpp"
#include "kikuchi/tangent_space.hpp"

namespace kikuchi {

namespace {

constexpr double kWeightFloor = 1e-9;
// Below this a normalized log-message underflows in the linear domain, so
// Δ no longer sees it move.
constexpr double kLogFloor = -700.0;
// A run only counts as converged once the log-messages have also settled;
// messages racing toward zero can leave Δ below tol while still moving.
constexpr double kLogDriftLimit = 1e-3;

double log_sum_exp(const std::vector<double>& v) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

void log_normalize(std::vector<double>& v) {
  double z = log_sum_exp(v);
  for (double& x : v) x -= z;
}

std::vector<double> exp_normalized(const std::vector<double>& logs) {
  std::vector<double> out(logs.size());
  double z = log_sum_exp(logs);
  for (std::size_t i = 0; i < logs.size(); ++i) out[i] = std::exp(logs[i] - z);
  return out;
}

void init_messages(MessageSet& msgs, const SolverOptions& opts) {
  Rng rng(opts.seed);
  for (auto& m : msgs.log_messages) {
    for (double& x : m.values) x = opts.init == InitKind::Random ? rng.uniform(-1.0, 1.0) : 0.0;
    log_normalize(m.values);
  }
}

void check_options(const SolverOptions& opts) {
  if (!(opts.damping >= 0.0 && opts.damping < 1.0) || !(opts.tol > 0.0) || opts.max_iters < 1)
    throw Error(ErrorKind::InvalidWeights, "solver options out of range");
}

// Shared driver: `update(i, current)` returns the undamped log-message for
// slot i computed from `current`.
template <typename Update>
void iterate(MessageSet& msgs, const SolverOptions& opts, SolverResult& res, Update update) {
  const std::size_t n = msgs.size();
  std::size_t entries = 0;
  for (const auto& m : msgs.log_messages) entries += m.size();
  if (n == 0) {
    res.converged = true;
    return;
  }
  MessageSet next = msgs;
  for (int it = 1; it <= opts.max_iters; ++it) {
    double change = 0.0, drift = 0.0;
    MessageSet& source = opts.schedule == Schedule::Parallel ? msgs : next;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> fresh = update(i, source);
      const auto& old = msgs.log_messages[i].values;
      for (std::size_t k = 0; k < fresh.size(); ++k)
        fresh[k] = (1.0 - opts.damping) * fresh[k] + opts.damping * old[k];
      log_normalize(fresh);
      for (std::size_t k = 0; k < fresh.size(); ++k) {
        if (!std::isfinite(fresh[k]) || fresh[k] < kLogFloor) throw NonFiniteMessage(it);
        change += std::abs(std::exp(fresh[k]) - std::exp(old[k]));
        drift = std::max(drift, std::abs(fresh[k] - old[k]));
      }
      next.log_messages[i].values = std::move(fresh);
    }
    msgs.log_messages.swap(next.log_messages);
    if (opts.schedule == Schedule::Sequential) next.log_messages = msgs.log_messages;
    res.iterations = it;
    res.delta_final = change / static_cast<double>(entries);
    res.delta_history.push_back(res.delta_final);
    if (res.delta_final <= opts.tol) {
      if (drift <= kLogDriftLimit) {
        res.converged = true;
        return;
      }
      if (it == opts.max_iters) throw NonFiniteMessage(it);
    }
  }
}

// Generalized solver layout --------------------------------------------------

struct HasseLayout {
  std::vector<std::pair<int, int>> edges;
  /// For edge (s, r): entry of s's table -> entry of r's table.
  std::vector<std::vector<std::size_t>> proj;
  std::vector<std::vector<int>> in_edges;   // edges (s, r) with r fixed
  std::vector<std::vector<int>> out_edges;  // edges (r, t) with r fixed
};

HasseLayout hasse_layout(const RegionGraph& graph) {
  HasseLayout h;
  h.edges = graph.hasse_edges();
  h.in_edges.resize(graph.num_regions());
  h.out_edges.resize(graph.num_regions());
  for (int e = 0; e < static_cast<int>(h.edges.size()); ++e) {
    auto [s, r] = h.edges[e];
    std::vector<int> cards;
    for (int v : graph.region(s)) cards.push_back(graph.domain_size(v));
    h.proj.push_back(projection_map(graph.region(s), cards, graph.region(r)));
    h.in_edges[r].push_back(e);
    h.out_edges[s].push_back(e);
  }
  return h;
}

void check_kikuchi_inputs(const RegionGraph& graph, const LogPotentials& theta,
                          const WeightVector& rho) {
  if (static_cast<int>(rho.size()) != graph.num_regions() ||
      static_cast<int>(theta.size()) != graph.num_regions())
    throw Error(ErrorKind::InvalidWeights, "need one weight and one table per region");
  for (int r = 0; r < graph.num_regions(); ++r) {
    if (!(std::abs(rho[r]) >= kWeightFloor))
      throw Error(ErrorKind::InvalidWeights, "region " + std::to_string(r) + " has zero weight");
    if (theta[r].scope != graph.region(r) || theta[r].size() != graph.table_size(r))
      throw Error(ErrorKind::ScopeMismatch, "θ table does not match its region");
    for (double x : theta[r].values)
      if (!std::isfinite(x)) throw Error(ErrorKind::InvalidModel, "θ must be finite");
  }
  for (auto [s, r] : graph.hasse_edges())
    if (!(std::abs(rho[r] + rho[s]) >= kWeightFloor))
      throw Error(ErrorKind::InvalidWeights, "weights of a Hasse pair cancel");
}

MessageSet empty_messages(const RegionGraph& graph, const HasseLayout& h) {
  MessageSet msgs;
  msgs.edges = h.edges;
  for (auto [s, r] : h.edges) {
    std::vector<int> cards;
    for (int v : graph.region(r)) cards.push_back(graph.domain_size(v));
    msgs.log_messages.emplace_back(graph.region(r), cards);
  }
  return msgs;
}

// Unnormalized log τ_r by the belief formula.
std::vector<double> log_belief(const LogPotentials& theta, const WeightVector& rho,
                               const HasseLayout& h, const MessageSet& msgs, int r) {
  std::vector<double> out(theta[r].values);
  for (double& x : out) x /= rho[r];
  for (int e : h.in_edges[r]) {
    double w = rho[h.edges[e].first] / rho[r];
    const auto& m = msgs.log_messages[e].values;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * m[k];
  }
  for (int e : h.out_edges[r]) {
    const auto& m = msgs.log_messages[e].values;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= m[h.proj[e][k]];
  }
  return out;
}

std::vector<double> kikuchi_update(const RegionGraph& graph, const LogPotentials& theta,
                                   const WeightVector& rho, const HasseLayout& h,
                                   const MessageSet& msgs, int edge) {
  auto [s, r] = h.edges[edge];
  // Numerator exponent over x_s.
  std::vector<double> a(theta[s].values);
  for (double& x : a) x /= rho[s];
  for (int e : h.in_edges[s]) {
    double w = rho[h.edges[e].first] / rho[s];
    const auto& m = msgs.log_messages[e].values;
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += w * m[k];
  }
  for (int e : h.out_edges[s]) {
    if (e == edge) continue;
    const auto& m = msgs.log_messages[e].values;
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= m[h.proj[e][k]];
  }
  const std::size_t nr = graph.table_size(r);
  std::vector<double> hi(nr, -std::numeric_limits<double>::infinity());
  const auto& proj = h.proj[edge];
  for (std::size_t k = 0; k < a.size(); ++k) hi[proj[k]] = std::max(hi[proj[k]], a[k]);
  std::vector<double> acc(nr, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) acc[proj[k]] += std::exp(a[k] - hi[proj[k]]);

  // Denominator exponent over x_r.
  std::vector<double> b(theta[r].values);
  for (double& x : b) x /= rho[r];
  for (int e : h.in_edges[r]) {
    if (e == edge) continue;
    double w = rho[h.edges[e].first] / rho[r];
    const auto& m = msgs.log_messages[e].values;
    for (std::size_t k = 0; k < nr; ++k) b[k] += w * m[k];
  }
  for (int e : h.out_edges[r]) {
    const auto& m = msgs.log_messages[e].values;
    for (std::size_t k = 0; k < nr; ++k) b[k] -= m[h.proj[e][k]];
  }
  const double power = rho[r] / (rho[r] + rho[s]);
  std::vector<double> out(nr);
  for (std::size_t k = 0; k < nr; ++k) out[k] = power * (hi[k] + std::log(acc[k]) - b[k]);
  return out;
}

// Pairwise solver layout -----------------------------------------------------

struct PairwiseLayout {
  /// Incident (neighbor, edge index) lists.
  std::vector<std::vector<std::pair<int, int>>> incident;
};

PairwiseLayout pairwise_layout(const SimpleGraph& g) {
  PairwiseLayout p;
  p.incident.resize(g.num_vertices);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    auto [a, b] = g.edges[e];
    p.incident[a].push_back({b, e});
    p.incident[b].push_back({a, e});
  }
  return p;
}

// Slot of the message from -> to along edge e = (a, b).
int slot(const SimpleGraph& g, int e, int from) { return 2 * e + (g.edges[e].first == from ? 0 : 1); }

double spin(int idx) { return 2.0 * idx - 1.0; }

void check_pairwise_inputs(const IsingModel& model, const std::vector<double>& rho_edges) {
  validate(model);
  if (rho_edges.size() != model.graph.edges.size())
    throw Error(ErrorKind::InvalidWeights, "need one weight per edge");
  for (double w : rho_edges)
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(ErrorKind::NonPositiveEdgeWeight, "edge weights must be positive");
}

MessageSet pairwise_messages(const SimpleGraph& g) {
  MessageSet msgs;
  for (auto [a, b] : g.edges) {
    msgs.edges.push_back({a, b});
    msgs.log_messages.emplace_back(std::vector<int>{b}, std::vector<int>{2});
    msgs.edges.push_back({b, a});
    msgs.log_messages.emplace_back(std::vector<int>{a}, std::vector<int>{2});
  }
  return msgs;
}

// Σ_{u∈N(t)∖s} ρ_ut log M_ut(x_t) − (1 − ρ_st) log M_st(x_t) + γ_t(x_t).
double cavity(const IsingModel& m, const std::vector<double>& rho, const PairwiseLayout& p,
              const MessageSet& msgs, int t, int s_edge, int xt) {
  const auto& g = m.graph;
  double v = m.gamma_s[t] * spin(xt);
  for (auto [u, e] : p.incident[t]) {
    const double lm = msgs.log_messages[slot(g, e, u)][xt];
    v += e == s_edge ? -(1.0 - rho[e]) * lm : rho[e] * lm;
  }
  return v;
}

std::vector<double> pairwise_update(const IsingModel& m, const std::vector<double>& rho,
                                    const PairwiseLayout& p, const MessageSet& msgs, int slot_id) {
  const int e = slot_id / 2;
  auto [t, s] = msgs.edges[slot_id];
  std::vector<double> out(2);
  for (int xs = 0; xs < 2; ++xs) {
    std::vector<double> terms(2);
    for (int xt = 0; xt < 2; ++xt)
      terms[xt] = m.gamma_st[e] * spin(xs) * spin(xt) / rho[e] + cavity(m, rho, p, msgs, t, e, xt);
    out[xs] = log_sum_exp(terms);
  }
  return out;
}

Pseudomarginals pairwise_beliefs(const IsingModel& m, const std::vector<double>& rho,
                                 const PairwiseLayout& p, const MessageSet& msgs) {
  const auto& g = m.graph;
  RegionGraph graph = from_ising(m);
  Pseudomarginals tau = region_tables(graph);
  for (int s = 0; s < g.num_vertices; ++s) {
    std::vector<double> l(2);
    for (int x = 0; x < 2; ++x) {
      l[x] = m.gamma_s[s] * spin(x);
      for (auto [u, e] : p.incident[s]) l[x] += rho[e] * msgs.log_messages[slot(g, e, u)][x];
    }
    tau[s].values = exp_normalized(l);
  }
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    auto [a, b] = g.edges[e];
    std::vector<double> l(4);
    for (int xa = 0; xa < 2; ++xa)
      for (int xb = 0; xb < 2; ++xb)
        l[2 * xa + xb] = m.gamma_st[e] * spin(xa) * spin(xb) / rho[e] +
                         cavity(m, rho, p, msgs, a, e, xa) + cavity(m, rho, p, msgs, b, e, xb);
    tau[g.num_vertices + e].values = exp_normalized(l);
  }
  return tau;
}

double max_abs_difference(const Pseudomarginals& a, const Pseudomarginals& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t k = 0; k < a[r].size(); ++k)
      worst = std::max(worst, std::abs(a[r][k] - b[r][k]));
  return worst;
}

double fixed_point_residual(const RegionGraph& graph, const LogPotentials& theta,
                            const WeightVector& rho, const Pseudomarginals& rebuilt,
                            const Pseudomarginals& tau) {
  if (tau.size() != static_cast<std::size_t>(graph.num_regions()))
    return std::numeric_limits<double>::infinity();
  double residual = max_abs_difference(rebuilt, tau);
  residual = std::max(residual, validate_local_polytope(graph, tau, 1.0).max_residual);

  TangentSpace space(graph);
  Eigen::VectorXd grad(space.ambient_dimension());
  Eigen::Index k = 0;
  for (int r = 0; r < graph.num_regions(); ++r)
    for (std::size_t i = 0; i < tau[r].size(); ++i) {
      double p = tau[r][i];
      if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
      grad(k++) = theta[r][i] - rho[r] * (std::log(p) + 1.0);
    }
  return std::max(residual, space.project(grad).cwiseAbs().maxCoeff());
}

}  // namespace

SolverResult run_kikuchi_rsp(const RegionGraph& graph, const LogPotentials& theta,
                             const WeightVector& rho, const SolverOptions& opts) {
  check_options(opts);
  check_kikuchi_inputs(graph, theta, rho);
  HasseLayout h = hasse_layout(graph);
  SolverResult res;
  res.messages = empty_messages(graph, h);
  init_messages(res.messages, opts);
  iterate(res.messages, opts, res, [&](std::size_t i, const MessageSet& cur) {
    return kikuchi_update(graph, theta, rho, h, cur, static_cast<int>(i));
  });
  res.tau = beliefs_from_messages(graph, theta, rho, res.messages);
  res.objective = res.converged ? kikuchi_objective(graph, theta, rho, res.tau)
                                : objective_terms(graph, theta, rho, res.tau);
  return res;
}

Pseudomarginals beliefs_from_messages(const RegionGraph& graph, const LogPotentials& theta,
                                      const WeightVector& rho, const MessageSet& messages) {
  check_kikuchi_inputs(graph, theta, rho);
  HasseLayout h = hasse_layout(graph);
  if (messages.edges != h.edges)
    throw Error(ErrorKind::ScopeMismatch, "messages do not follow the Hasse diagram");
  Pseudomarginals tau = region_tables(graph);
  for (int r = 0; r < graph.num_regions(); ++r)
    tau[r].values = exp_normalized(log_belief(theta, rho, h, messages, r));
  return tau;
}

SolverResult run_pairwise_rsp(const IsingModel& model, const std::vector<double>& rho_edges,
                              const SolverOptions& opts) {
  check_options(opts);
  check_pairwise_inputs(model, rho_edges);
  PairwiseLayout p = pairwise_layout(model.graph);
  SolverResult res;
  res.messages = pairwise_messages(model.graph);
  init_messages(res.messages, opts);
  iterate(res.messages, opts, res, [&](std::size_t i, const MessageSet& cur) {
    return pairwise_update(model, rho_edges, p, cur, static_cast<int>(i));
  });
  res.tau = pairwise_beliefs(model, rho_edges, p, res.messages);
  RegionGraph graph = from_ising(model);
  auto theta = ising_log_potentials(model);
  auto rho = bethe_weights(model.graph, rho_edges);
  res.objective = res.converged ? kikuchi_objective(graph, theta, rho, res.tau)
                                : objective_terms(graph, theta, rho, res.tau);
  return res;
}

Pseudomarginals beliefs_from_messages(const IsingModel& model,
                                      const std::vector<double>& rho_edges,
                                      const MessageSet& messages) {
  check_pairwise_inputs(model, rho_edges);
  if (messages.size() != 2 * model.graph.edges.size())
    throw Error(ErrorKind::ScopeMismatch, "need two messages per edge");
  return pairwise_beliefs(model, rho_edges, pairwise_layout(model.graph), messages);
}

double stationarity_residual(const RegionGraph& graph, const LogPotentials& theta,
                             const WeightVector& rho, const MessageSet& messages,
                             const Pseudomarginals& tau) {
  return fixed_point_residual(graph, theta, rho,
                              beliefs_from_messages(graph, theta, rho, messages), tau);
}

double stationarity_residual(const IsingModel& model, const std::vector<double>& rho_edges,
                             const MessageSet& messages, const Pseudomarginals& tau) {
  return fixed_point_residual(from_ising(model), ising_log_potentials(model),
                              bethe_weights(model.graph, rho_edges),
                              beliefs_from_messages(model, rho_edges, messages), tau);
}

PrunedProblem prune_zero_weight_regions(const RegionGraph& graph, const LogPotentials& theta,
                                        const WeightVector& rho, double eps) {
  if (static_cast<int>(rho.size()) != graph.num_regions() ||
      static_cast<int>(theta.size()) != graph.num_regions())
    throw Error(ErrorKind::InvalidWeights, "need one weight and one table per region");
  std::vector<int> kept;
  std::vector<std::vector<int>> regions;
  for (int r = 0; r < graph.num_regions(); ++r)
    if (std::abs(rho[r]) >= eps) {
      kept.push_back(r);
      regions.push_back(graph.region(r));
    }
  PrunedProblem out{RegionGraph::build(graph.domain_sizes(), regions), {}, {}, kept};
  for (int r : kept) {
    out.theta.tables.push_back(theta[r]);
    out.rho.values.push_back(rho[r]);
  }
  for (int r = 0; r < graph.num_regions(); ++r) {
    if (std::abs(rho[r]) >= eps) continue;
    int host = -1;
    for (int i = 0; i < static_cast<int>(kept.size()); ++i)
      if (graph.contains(kept[i], r) &&
          (host < 0 || graph.region(kept[i]).size() < graph.region(kept[host]).size()))
        host = i;
    bool trivial = std::all_of(theta[r].values.begin(), theta[r].values.end(),
                               [](double x) { return x == 0.0; });
    if (host < 0) {
      if (trivial) continue;
      throw Error(ErrorKind::InvalidWeights,
                  "dropped region " + std::to_string(r) + " has no kept superset");
    }
    FactorTable& t = out.theta[host];
    auto map = projection_map(t.scope, t.cards, theta[r].scope);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] += theta[r][map[k]];
  }
  return out;
}

}  // namespace kikuchi
