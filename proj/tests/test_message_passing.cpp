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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kikuchi/errors.hpp"
#include "kikuchi/message_passing.hpp"
#include "kikuchi/tangent_space.hpp"
#include "oracles.hpp"

using namespace kikuchi;

namespace {

double max_diff(const Pseudomarginals& a, const Pseudomarginals& b) {
  double d = 0.0;
  for (std::size_t r = 0; r < a.tables.size(); ++r)
    for (std::size_t i = 0; i < a[r].values.size(); ++i)
      d = std::max(d, std::abs(a[r].values[i] - b[r].values[i]));
  return d;
}

IsingModel model_on(const SimpleGraph& g, CouplingKind kind, double omega_st, std::uint64_t seed) {
  return sample_ising(g, {kind, 0.1, omega_st, seed});
}

RegionGraph grid3_regions() {
  return RegionGraph::build(9, 2,
                            {{0, 1, 3, 4}, {1, 2, 4, 5}, {3, 4, 6, 7}, {4, 5, 7, 8},
                             {1, 4}, {3, 4}, {4, 5}, {4, 7}, {4}});
}

LogPotentials random_theta(const RegionGraph& g, Rng& rng, double scale) {
  auto theta = region_tables(g);
  for (auto& t : theta.tables)
    for (double& x : t.values) x = rng.uniform(-scale, scale);
  return theta;
}

}  // namespace

TEST_CASE("zero potentials give uniform beliefs") {
  auto g = grid3_regions();
  WeightVector rho(std::vector<double>(g.num_regions(), 1.0));
  auto res = run_kikuchi_rsp(g, region_tables(g), rho, {0.5, 1e-12, 500, Schedule::Parallel, InitKind::Random, 4});
  CHECK(res.converged);
  for (const auto& t : res.tau.tables)
    for (double x : t.values) CHECK(x == doctest::Approx(1.0 / t.size()));
  CHECK(stationarity_residual(g, region_tables(g), rho, res.messages, res.tau) <= 1e-10);
}

TEST_CASE("trees are exact") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto tree = oracle::random_tree(3 + static_cast<int>(rng.below(8)), rng);
    auto model = model_on(tree, CouplingKind::Mixed, 2.0, trial);
    auto exact = exact_inference(from_ising(model), ising_log_potentials(model));
    std::vector<double> ones(tree.edges.size(), 1.0);
    auto res = run_pairwise_rsp(model, ones);
    REQUIRE(res.converged);
    CHECK(max_diff(res.tau, exact.marginals) <= 1e-8);
    CHECK(res.objective.total == doctest::Approx(exact.log_partition).epsilon(1e-9));
    CHECK(stationarity_residual(model, ones, res.messages, res.tau) <= 1e-8);
  }
}

TEST_CASE("chain with all-ones weights is stationary") {
  auto chain = make_simple_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  auto model = model_on(chain, CouplingKind::Mixed, 2.0, 1);
  auto g = from_ising(model);
  auto theta = ising_log_potentials(model);
  WeightVector rho(std::vector<double>(g.num_regions(), 1.0));
  auto res = run_kikuchi_rsp(g, theta, rho);
  REQUIRE(res.converged);
  CHECK(validate_local_polytope(g, res.tau).passed);
  CHECK(stationarity_residual(g, theta, rho, res.messages, res.tau) <= 1e-8);
}

TEST_CASE("saturated messages are reported") {
  auto star = make_simple_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  auto star_model = model_on(star, CouplingKind::Mixed, 2.0, 0);
  auto g = from_ising(star_model);
  auto theta = ising_log_potentials(star_model);
  // Leaves have ρ_s = 0 and fold into their edge; the hub keeps ρ_s = -4 and
  // its belief is driven to a vertex of the simplex.
  auto pruned = prune_zero_weight_regions(g, theta, bethe_weights(star, std::vector<double>(5, 1.0)));
  CHECK(pruned.kept == std::vector<int>{0, 6, 7, 8, 9, 10});
  CHECK(exact_log_partition(pruned.graph, pruned.theta) == doctest::Approx(exact_log_partition(g, theta)));
  CHECK_THROWS_AS(run_kikuchi_rsp(pruned.graph, pruned.theta, pruned.rho, {0.5, 1e-12, 5000}), NonFiniteMessage);

  auto tree = make_simple_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 5}});
  auto model = model_on(tree, CouplingKind::Mixed, 2.0, 0);
  CHECK_THROWS_AS(run_kikuchi_rsp(from_ising(model), ising_log_potentials(model),
                                  bethe_weights(tree, std::vector<double>(5, 0.9)), {0.5, 1e-12, 5000}),
                  NonFiniteMessage);
}

TEST_CASE("star tree with a leaf of weight one") {
  auto star = make_simple_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  auto model = model_on(star, CouplingKind::Attractive, 1.5, 2);
  auto res = run_pairwise_rsp(model, std::vector<double>(5, 1.0));
  auto exact = exact_marginals(from_ising(model), ising_log_potentials(model));
  CHECK(max_diff(res.tau, exact) <= 1e-8);
}

TEST_CASE("a single plaquette after pruning is exact") {
  auto g = RegionGraph::build(4, 2, {{0}, {1}, {2}, {3}, {0, 1}, {1, 3}, {2, 3}, {0, 2}, {0, 1, 2, 3}});
  auto c = overcounting_numbers(g);
  Rng rng(3);
  auto theta = random_theta(g, rng, 1.0);
  for (int r = 0; r < 8; ++r) CHECK(c[r] == 0.0);
  auto pruned = prune_zero_weight_regions(g, theta, WeightVector(c));
  CHECK(pruned.kept == std::vector<int>{8});
  auto res = run_kikuchi_rsp(pruned.graph, pruned.theta, pruned.rho);
  CHECK(res.converged);
  CHECK(res.objective.total == doctest::Approx(exact_log_partition(g, theta)).epsilon(1e-12));

  auto orphan = RegionGraph::build(2, 2, {{0}, {1}});
  CHECK_THROWS_AS(prune_zero_weight_regions(orphan, random_theta(orphan, rng, 1.0),
                                            WeightVector({0.0, 1.0})),
                  Error);
}

TEST_CASE("grid with positive weights has one fixed point") {
  auto g = grid3_regions();
  Rng rng(11);
  auto theta = random_theta(g, rng, 1.0);
  WeightVector rho(std::vector<double>(g.num_regions(), 1.0));
  SolverOptions opts{0.5, 1e-12, 5000, Schedule::Parallel, InitKind::Uniform, 0};
  auto base = run_kikuchi_rsp(g, theta, rho, opts);
  REQUIRE(base.converged);
  CHECK(stationarity_residual(g, theta, rho, base.messages, base.tau) <= 1e-9);
  CHECK(validate_local_polytope(g, base.tau, 1e-9).passed);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    opts.init = InitKind::Random;
    opts.seed = seed;
    opts.schedule = seed % 2 ? Schedule::Sequential : Schedule::Parallel;
    auto other = run_kikuchi_rsp(g, theta, rho, opts);
    REQUIRE(other.converged);
    CHECK(max_diff(other.tau, base.tau) <= 1e-8);
    CHECK(other.objective.total == doctest::Approx(base.objective.total).epsilon(1e-10));
  }
}

TEST_CASE("perturbed messages are not stationary") {
  auto k4 = complete_graph(4);
  auto model = model_on(k4, CouplingKind::Mixed, 1.0, 5);
  std::vector<double> rho(6, 0.5);
  auto res = run_pairwise_rsp(model, rho, {0.5, 1e-12, 5000});
  REQUIRE(res.converged);
  CHECK(stationarity_residual(model, rho, res.messages, res.tau) <= 1e-9);
  auto bent = res.messages;
  bent.log_messages[3].values[0] += 0.05;
  auto tau = beliefs_from_messages(model, rho, bent);
  CHECK(stationarity_residual(model, rho, bent, tau) > 1e-3);
}

TEST_CASE("constant shifts of potentials move the objective only") {
  auto k4 = complete_graph(4);
  auto model = model_on(k4, CouplingKind::Mixed, 1.0, 6);
  auto g = from_ising(model);
  auto theta = ising_log_potentials(model);
  auto rho = bethe_weights(k4, std::vector<double>(6, 0.3));
  auto a = run_kikuchi_rsp(g, theta, rho, {0.5, 1e-12, 5000});
  for (double& x : theta[5].values) x += 0.7;
  auto b = run_kikuchi_rsp(g, theta, rho, {0.5, 1e-12, 5000});
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(max_diff(a.tau, b.tau) <= 1e-9);
  CHECK(b.objective.total - a.objective.total == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("generalized and pairwise solvers agree") {
  auto k4 = complete_graph(4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto model = model_on(k4, CouplingKind::Mixed, 1.0, seed);
    std::vector<double> rho(6, 0.3);
    SolverOptions opts{0.5, 1e-12, 10000};
    auto pw = run_pairwise_rsp(model, rho, opts);
    auto gen = run_kikuchi_rsp(from_ising(model), ising_log_potentials(model), bethe_weights(k4, rho), opts);
    REQUIRE(pw.converged);
    REQUIRE(gen.converged);
    CHECK(max_diff(pw.tau, gen.tau) <= 1e-8);
    CHECK(pw.objective.total == doctest::Approx(gen.objective.total).epsilon(1e-10));
  }
}

TEST_CASE("bounds and monotonicity on K4") {
  auto k4 = complete_graph(4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto model = model_on(k4, CouplingKind::Mixed, 0.5, 100 + seed);
    double log_z = exact_log_partition(from_ising(model), ising_log_potentials(model));
    double prev = INFINITY;
    for (double r : {0.2, 0.35, 0.5, 0.6}) {
      auto res = run_pairwise_rsp(model, std::vector<double>(6, r), {0.5, 1e-12, 10000});
      REQUIRE(res.converged);
      CHECK(res.objective.total <= prev + 1e-9);
      prev = res.objective.total;
      // 2/n is the uniform spanning-tree weight.
      if (r == 0.5) CHECK(res.objective.total >= log_z - 1e-9);
    }
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto model = model_on(k4, CouplingKind::Attractive, 0.5, 200 + seed);
    auto res = run_pairwise_rsp(model, std::vector<double>(6, 1.0), {0.5, 1e-12, 10000});
    REQUIRE(res.converged);
    CHECK(res.objective.total <= exact_log_partition(from_ising(model), ising_log_potentials(model)) + 1e-9);
  }
}

TEST_CASE("solver errors") {
  auto k3 = complete_graph(3);
  auto model = model_on(k3, CouplingKind::Mixed, 1.0, 0);
  CHECK_THROWS_AS(run_pairwise_rsp(model, {1.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(run_pairwise_rsp(model, {1.0, 1.0}), Error);
  auto g = from_ising(model);
  // ρ_s = 1 - 2·0.5 = 0 on every vertex.
  CHECK_THROWS_AS(run_kikuchi_rsp(g, ising_log_potentials(model), bethe_weights(k3, {0.5, 0.5, 0.5})), Error);
  // ρ_st + ρ_s = 1 - 1 = 0 on every Hasse edge.
  CHECK_THROWS_AS(run_kikuchi_rsp(g, ising_log_potentials(model), bethe_weights(k3, {1.0, 1.0, 1.0})),
                  Error);
  auto other = RegionGraph::build(3, 3, g.regions());
  CHECK_THROWS_AS(run_kikuchi_rsp(other, ising_log_potentials(model), bethe_weights(k3, {0.4, 0.4, 0.4})),
                  Error);
}

TEST_CASE("history and iteration counts") {
  auto k4 = complete_graph(4);
  auto model = model_on(k4, CouplingKind::Mixed, 1.0, 9);
  auto res = run_pairwise_rsp(model, std::vector<double>(6, 0.5), {0.5, 1e-10, 5000});
  REQUIRE(res.converged);
  CHECK(res.delta_history.size() == static_cast<std::size_t>(res.iterations));
  CHECK(res.delta_final == res.delta_history.back());
  CHECK(res.delta_final < 1e-10);
  auto capped = run_pairwise_rsp(model, std::vector<double>(6, 0.5), {0.5, 1e-10, 3});
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 3);
}

TEST_CASE("tangent space of a grid region graph") {
  auto g = grid3_regions();
  TangentSpace space(g);
  Rng rng(13);
  auto a = exact_marginals(g, random_theta(g, rng, 1.0));
  auto b = exact_marginals(g, random_theta(g, rng, 1.0));
  Eigen::VectorXd d = space.flatten(a) - space.flatten(b);
  CHECK((space.project(d) - d).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::MatrixXd gram = space.basis().transpose() * space.basis();
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-12);
  // Constant offsets on a single region leave the polytope.
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.ambient_dimension()));
  e.head(16).setOnes();
  CHECK(space.project(e).norm() <= 1e-12);
}

TEST_CASE("uniqueness below the cycle threshold and several optima above it on K5") {
  auto k5 = complete_graph(5);
  auto model = model_on(k5, CouplingKind::Mixed, 2.0, 33);
  auto spread = [&](double rho) {
    double lo = INFINITY, hi = -INFINITY;
    int converged = 0;
    for (std::uint64_t s = 0; s < 8; ++s) {
      auto res = run_pairwise_rsp(model, std::vector<double>(10, rho),
                                  {0.5, 1e-10, 2500, Schedule::Parallel, InitKind::Random, s});
      if (!res.converged) continue;
      ++converged;
      lo = std::min(lo, res.objective.total);
      hi = std::max(hi, res.objective.total);
    }
    return std::pair{converged, hi - lo};
  };
  auto [n_low, low] = spread(0.4);
  CHECK(n_low == 8);
  CHECK(low <= 1e-6);
  auto [n_high, high] = spread(1.125);
  CHECK(n_high >= 2);
  CHECK(high > 1e-3);
}
