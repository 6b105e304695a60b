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

#include "kikuchi/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "kikuchi/errors.hpp"

namespace kikuchi {

namespace {

void require_matching(const RegionGraph& graph, const RegionTables& tables, const char* what) {
  if (static_cast<int>(tables.size()) != graph.num_regions())
    throw Error(ErrorKind::ScopeMismatch, std::string(what) + " needs one table per region");
  for (int r = 0; r < graph.num_regions(); ++r) {
    if (tables[r].scope != graph.region(r) || tables[r].size() != graph.table_size(r))
      throw Error(ErrorKind::ScopeMismatch,
                  std::string(what) + " table " + std::to_string(r) + " has the wrong scope");
  }
}

void require_weights(const RegionGraph& graph, const WeightVector& rho) {
  if (static_cast<int>(rho.size()) != graph.num_regions())
    throw Error(ErrorKind::InvalidWeights, "weight vector needs one entry per region");
  for (double w : rho.values)
    if (!std::isfinite(w)) throw Error(ErrorKind::InvalidWeights, "weights must be finite");
}

}  // namespace

ConsistencyReport validate_local_polytope(const RegionGraph& graph, const Pseudomarginals& tau,
                                          double tol) {
  require_matching(graph, tau, "pseudomarginals");
  ConsistencyReport rep;
  rep.min_entry = std::numeric_limits<double>::infinity();
  for (const auto& t : tau.tables) {
    for (double v : t.values) rep.min_entry = std::min(rep.min_entry, v);
    rep.max_mass_error = std::max(rep.max_mass_error, std::abs(t.sum() - 1.0));
  }
  for (const auto& [u, t] : graph.strict_containments()) {
    auto m = marginalize(tau[u], graph.region(t));
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      worst = std::max(worst, std::abs(m[i] - tau[t][i]));
    if (!rep.worst_pair || worst > rep.max_residual) {
      rep.max_residual = worst;
      rep.worst_pair = std::make_pair(u, t);
    }
  }
  rep.passed = rep.max_residual <= tol && rep.min_entry >= -tol && rep.max_mass_error <= tol;
  return rep;
}

double kikuchi_entropy(const RegionGraph& graph, const Pseudomarginals& tau,
                       const WeightVector& rho) {
  require_matching(graph, tau, "pseudomarginals");
  require_weights(graph, rho);
  double h = 0.0;
  for (int r = 0; r < graph.num_regions(); ++r)
    if (rho[r] != 0.0) h += rho[r] * entropy(tau[r]);
  return h;
}

double inner_product(const LogPotentials& theta, const Pseudomarginals& tau) {
  if (theta.size() != tau.size())
    throw Error(ErrorKind::ScopeMismatch, "theta and tau differ in region count");
  double s = 0.0;
  for (std::size_t r = 0; r < tau.size(); ++r) {
    if (theta[r].size() != tau[r].size())
      throw Error(ErrorKind::ScopeMismatch, "theta and tau tables differ in size");
    for (std::size_t i = 0; i < tau[r].size(); ++i) s += theta[r][i] * tau[r][i];
  }
  return s;
}

ObjectiveValue kikuchi_objective(const RegionGraph& graph, const LogPotentials& theta,
                                 const WeightVector& rho, const Pseudomarginals& tau) {
  require_matching(graph, theta, "log-potentials");
  auto rep = validate_local_polytope(graph, tau, kAcceptTolerance);
  if (!rep.passed)
    throw Error(ErrorKind::InvalidPseudomarginals,
                "consistency residual " + std::to_string(rep.max_residual));
  return objective_terms(graph, theta, rho, tau);
}

ObjectiveValue objective_terms(const RegionGraph& graph, const LogPotentials& theta,
                               const WeightVector& rho, const Pseudomarginals& tau) {
  require_matching(graph, theta, "log-potentials");
  ObjectiveValue out;
  out.inner_product = inner_product(theta, tau);
  out.entropy = kikuchi_entropy(graph, tau, rho);
  out.total = out.inner_product + out.entropy;
  return out;
}

BetheEntropyForms bethe_entropy_forms(const TwoLayerView& view, const Pseudomarginals& tau,
                                      const WeightVector& rho) {
  const int n = view.num_vertices;
  // Singleton marginal and entropy for every vertex touched by the view.
  std::vector<std::optional<FactorTable>> single(n);
  for (int v : view.vertices) single[v] = tau[view.singleton_region[v]];
  for (int f = 0; f < view.num_factors(); ++f)
    for (int v : view.factor_members[f])
      if (!single[v]) single[v] = marginalize(tau[view.factor_regions[f]], {v});

  std::vector<double> rho_single(n, 0.0), rho_prime(n, 0.0);
  for (int v : view.vertices) rho_single[v] = rho[view.singleton_region[v]];
  for (int v = 0; v < n; ++v) {
    rho_prime[v] = rho_single[v];
    for (int f : view.factors_of_vertex[v]) rho_prime[v] += rho[view.factor_regions[f]];
  }

  BetheEntropyForms out;
  std::vector<double> h_single(n, 0.0);
  for (int v = 0; v < n; ++v)
    if (single[v]) h_single[v] = entropy(*single[v]);
  std::vector<double> h_factor(view.num_factors());
  for (int f = 0; f < view.num_factors(); ++f) h_factor[f] = entropy(tau[view.factor_regions[f]]);

  for (int v : view.vertices) out.plain += rho_single[v] * h_single[v];
  for (int f = 0; f < view.num_factors(); ++f)
    out.plain += rho[view.factor_regions[f]] * h_factor[f];

  for (int v = 0; v < n; ++v)
    if (single[v]) out.mi_form += rho_prime[v] * h_single[v];
  for (int f = 0; f < view.num_factors(); ++f) {
    const auto& joint = tau[view.factor_regions[f]];
    FactorTable independent = *single[view.factor_members[f][0]];
    for (std::size_t k = 1; k < view.factor_members[f].size(); ++k)
      independent = product(independent, *single[view.factor_members[f][k]]);
    out.mi_form -= rho[view.factor_regions[f]] * kl_divergence(joint, independent);
  }

  bool ones = true;
  for (int v = 0; v < n; ++v) {
    if (!single[v]) continue;
    if (view.singleton_region[v] < 0 || std::abs(rho_prime[v] - 1.0) > 1e-12) ones = false;
  }
  if (ones) {
    double h = 0.0;
    for (int v : view.vertices) {
      double w = 1.0;
      for (int f : view.factors_of_vertex[v]) w -= rho[view.factor_regions[f]];
      h += w * h_single[v];
    }
    for (int f = 0; f < view.num_factors(); ++f) h += rho[view.factor_regions[f]] * h_factor[f];
    out.ones_form = h;
  }
  return out;
}

namespace {

constexpr std::size_t kChunkStates = std::size_t{1} << 16;

struct ChunkResult {
  double max_energy = -std::numeric_limits<double>::infinity();
  double weight = 0.0;         // Σ exp(E - max_energy)
  double energy_moment = 0.0;  // Σ E exp(E - max_energy)
  std::vector<std::vector<double>> marginals;
};

// Walks the assignments [begin, end) with an odometer over the vertices
// (last vertex fastest), maintaining the table index of every region.
class AssignmentWalker {
 public:
  AssignmentWalker(const RegionGraph& graph, std::size_t start)
      : graph_(graph), digits_(graph.num_vertices(), 0), index_(graph.num_regions(), 0) {
    const int n = graph.num_vertices();
    strides_.assign(n, {});
    for (int r = 0; r < graph.num_regions(); ++r) {
      std::size_t stride = 1;
      const auto& reg = graph.region(r);
      for (std::size_t k = reg.size(); k-- > 0;) {
        strides_[reg[k]].emplace_back(r, stride);
        stride *= static_cast<std::size_t>(graph.domain_size(reg[k]));
      }
    }
    for (int v = n; v-- > 0;) {
      digits_[v] = static_cast<int>(start % graph.domain_size(v));
      start /= graph.domain_size(v);
      for (const auto& [r, stride] : strides_[v]) index_[r] += digits_[v] * stride;
    }
  }

  const std::vector<std::size_t>& index() const { return index_; }

  void advance() {
    for (int v = graph_.num_vertices(); v-- > 0;) {
      if (++digits_[v] < graph_.domain_size(v)) {
        for (const auto& [r, stride] : strides_[v]) index_[r] += stride;
        return;
      }
      for (const auto& [r, stride] : strides_[v])
        index_[r] -= stride * static_cast<std::size_t>(graph_.domain_size(v) - 1);
      digits_[v] = 0;
    }
  }

 private:
  const RegionGraph& graph_;
  std::vector<int> digits_;
  std::vector<std::size_t> index_;
  std::vector<std::vector<std::pair<int, std::size_t>>> strides_;
};

ChunkResult run_chunk(const RegionGraph& graph, const LogPotentials& theta, std::size_t begin,
                      std::size_t end) {
  const int m = graph.num_regions();
  std::vector<double> energy(end - begin);
  {
    AssignmentWalker walk(graph, begin);
    for (std::size_t i = 0; i < energy.size(); ++i) {
      double e = 0.0;
      for (int r = 0; r < m; ++r) e += theta[r][walk.index()[r]];
      energy[i] = e;
      walk.advance();
    }
  }
  ChunkResult out;
  out.max_energy = *std::max_element(energy.begin(), energy.end());
  out.marginals.resize(m);
  for (int r = 0; r < m; ++r) out.marginals[r].assign(graph.table_size(r), 0.0);
  AssignmentWalker walk(graph, begin);
  for (std::size_t i = 0; i < energy.size(); ++i) {
    double w = std::exp(energy[i] - out.max_energy);
    out.weight += w;
    out.energy_moment += w * energy[i];
    for (int r = 0; r < m; ++r) out.marginals[r][walk.index()[r]] += w;
    walk.advance();
  }
  return out;
}

}  // namespace

ExactResult exact_inference(const RegionGraph& graph, const LogPotentials& theta,
                            const ExactOptions& opts) {
  require_matching(graph, theta, "log-potentials");
  std::size_t total = 1;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    total *= static_cast<std::size_t>(graph.domain_size(v));
    if (total > opts.max_states)
      throw Error(ErrorKind::TooLarge, "joint state space exceeds " +
                                           std::to_string(opts.max_states) + " assignments");
  }
  const std::size_t chunks = (total + kChunkStates - 1) / kChunkStates;
  std::vector<ChunkResult> parts(chunks);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < chunks; c += stride)
      parts[c] = run_chunk(graph, theta, c * kChunkStates, std::min(total, (c + 1) * kChunkStates));
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(chunks, static_cast<std::size_t>(std::max(1, opts.threads))));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }

  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : parts) top = std::max(top, p.max_energy);
  double z = 0.0, moment = 0.0;
  ExactResult out;
  out.marginals = region_tables(graph);
  for (const auto& p : parts) {
    double scale = std::exp(p.max_energy - top);
    z += p.weight * scale;
    moment += p.energy_moment * scale;
    for (int r = 0; r < graph.num_regions(); ++r)
      for (std::size_t i = 0; i < p.marginals[r].size(); ++i)
        out.marginals[r][i] += p.marginals[r][i] * scale;
  }
  out.log_partition = top + std::log(z);
  out.entropy = out.log_partition - moment / z;
  for (auto& t : out.marginals.tables)
    for (double& v : t.values) v /= z;
  return out;
}

double exact_log_partition(const RegionGraph& graph, const LogPotentials& theta,
                           const ExactOptions& opts) {
  return exact_inference(graph, theta, opts).log_partition;
}

Pseudomarginals exact_marginals(const RegionGraph& graph, const LogPotentials& theta,
                                const ExactOptions& opts) {
  return exact_inference(graph, theta, opts).marginals;
}

double exact_entropy(const RegionGraph& graph, const LogPotentials& theta,
                     const ExactOptions& opts) {
  return exact_inference(graph, theta, opts).entropy;
}

LogPotentials ising_log_potentials(const IsingModel& model) {
  validate(model);
  auto graph = from_ising(model);
  auto theta = region_tables(graph);
  const int n = model.graph.num_vertices;
  for (int v = 0; v < n; ++v) {
    theta[v][0] = -model.gamma_s[v];
    theta[v][1] = model.gamma_s[v];
  }
  for (std::size_t e = 0; e < model.graph.edges.size(); ++e) {
    auto& t = theta[n + e];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        t[2 * a + b] = model.gamma_st[e] * (2 * a - 1) * (2 * b - 1);
  }
  return theta;
}

WeightVector bethe_weights(const SimpleGraph& graph, const std::vector<double>& edge_weights) {
  if (edge_weights.size() != graph.edges.size())
    throw Error(ErrorKind::InvalidWeights, "need one weight per edge");
  WeightVector rho(std::vector<double>(graph.num_vertices + graph.edges.size(), 1.0));
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    rho[graph.num_vertices + e] = edge_weights[e];
    rho[graph.edges[e].first] -= edge_weights[e];
    rho[graph.edges[e].second] -= edge_weights[e];
  }
  return rho;
}

}  // namespace kikuchi
