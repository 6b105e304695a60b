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

#include <algorithm>
#include <numeric>

#include "kikuchi/errors.hpp"
#include "kikuchi/polytope.hpp"
#include "oracles.hpp"

using namespace kikuchi;

namespace {

FactorGraph hyperchain() { return FactorGraph{5, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}}}; }

FactorGraph random_hypergraph(Rng& rng) {
  FactorGraph g;
  g.num_vertices = 3 + static_cast<int>(rng.below(5));
  int m = 1 + static_cast<int>(rng.below(6));
  for (int f = 0; f < m; ++f) {
    std::vector<int> members;
    for (int v = 0; v < g.num_vertices; ++v)
      if (rng.uniform() < 0.4) members.push_back(v);
    if (members.size() < 2) members = {0, g.num_vertices - 1};
    g.factors.push_back(members);
  }
  return g;
}

EdgeSubset bits(std::uint32_t mask, int m) {
  EdgeSubset s(m);
  for (int f = 0; f < m; ++f) s[f] = mask >> f & 1u;
  return s;
}

}  // namespace

TEST_CASE("hyperchain example") {
  auto g = hyperchain();
  auto f = enumerate_F(g);
  CHECK(f.size() == 7);
  CHECK(std::find(f.begin(), f.end(), EdgeSubset{1, 1, 1}) == f.end());
  CHECK_FALSE(is_single_cycle_forest(g));

  auto inside = in_concavity_polytope(g, {1.0, 0.5, 1.0});
  CHECK(inside.member);
  CHECK_FALSE(inside.violating_U.has_value());
  auto conv = in_conv_F(g, {1.0, 0.5, 1.0});
  CHECK_FALSE(conv.member);
  CHECK(conv.certified);
  CHECK(conv.detail.distance > 0.1);

  auto outside = in_concavity_polytope(g, {1.0, 1.0, 1.0});
  CHECK_FALSE(outside.member);
  REQUIRE(outside.violating_U.has_value());
  CHECK(*outside.violating_U == std::vector<int>{1, 2, 3});
  CHECK(outside.violation == doctest::Approx(1.0));
  // U = V is violated as well, by less.
  double lhs = 0.0;
  for (const auto& a : g.factors) lhs += static_cast<double>(a.size()) - 1.0;
  CHECK(lhs - 5.0 == doctest::Approx(1.0));

  auto w = proposition1_witness(g);
  REQUIRE(w.has_value());
  CHECK(w->base == EdgeSubset{1, 0, 1});
  CHECK(w->extra == 1);
  CHECK(w->rho == FactorWeights{1.0, 0.5, 1.0});
}

TEST_CASE("out-of-box weights are not members") {
  auto g = hyperchain();
  auto m = in_concavity_polytope(g, {1.2, 0.0, 0.0});
  CHECK_FALSE(m.member);
  CHECK_FALSE(m.violating_U.has_value());
  CHECK_FALSE(in_concavity_polytope(g, {-0.1, 0.0, 0.0}).member);
}

TEST_CASE("small pairwise families") {
  auto tri = factor_graph(complete_graph(3));
  CHECK(enumerate_F(tri).size() == 8);
  CHECK(is_single_cycle_forest(tri));
  auto path = factor_graph(make_simple_graph(4, {{0, 1}, {1, 2}, {2, 3}}));
  CHECK(enumerate_F(path).size() == 8);
  auto k4 = factor_graph(complete_graph(4));
  CHECK_FALSE(is_single_cycle_forest(k4));
  CHECK_FALSE(proposition1_witness(tri).has_value());
}

TEST_CASE("single-cycle forest test agrees with the oracle") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_hypergraph(rng);
    int m = g.num_factors();
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
      CHECK(is_single_cycle_forest(g, bits(mask, m)) ==
            oracle::single_cycle_forest_hyper(g.num_vertices, g.factors, mask));
  }
}

TEST_CASE("membership agrees with the oracle") {
  Rng rng(4);
  int members = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto g = random_hypergraph(rng);
    FactorWeights rho(g.num_factors());
    for (double& r : rho) r = std::round(rng.uniform() * 4) / 4;
    auto res = in_concavity_polytope(g, rho);
    CHECK(res.member == oracle::in_C(g.num_vertices, g.factors, rho));
    members += res.member;
    if (!res.member) {
      REQUIRE(res.violating_U.has_value());
      CHECK(res.violation > 0.0);
    }
  }
  CHECK(members > 30);
  CHECK(members < 290);
}

TEST_CASE("integral points of the pairwise polytope are the single-cycle forests") {
  Rng rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    auto sg = oracle::random_graph(3 + static_cast<int>(rng.below(4)), 10, rng);
    auto g = factor_graph(sg);
    int m = g.num_factors();
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      auto s = bits(mask, m);
      FactorWeights rho(s.begin(), s.end());
      CHECK(in_concavity_polytope(g, rho).member == is_single_cycle_forest(g, s));
    }
  }
}

TEST_CASE("greedy forest is optimal") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = oracle::random_graph(3 + static_cast<int>(rng.below(5)), 12, rng);
    std::vector<double> w(g.edges.size());
    bool integral = trial % 2 == 0;
    for (double& x : w) x = integral ? 1.0 + static_cast<double>(rng.below(4)) : rng.uniform(0.01, 3.0);
    auto best = max_weight_single_cycle_forest(g, w);
    CHECK(best.value == doctest::Approx(oracle::max_weight_scf(g, w)));
    CHECK(is_single_cycle_forest(factor_graph(g), best.subset));
    if (integral) CHECK(lp_upper_bound(g, w) == doctest::Approx(best.value));
  }
}

TEST_CASE("greedy value does not depend on tie order") {
  auto g = complete_graph(5);
  std::vector<double> w(g.edges.size(), 1.0);
  auto a = max_weight_single_cycle_forest(g, w);
  CHECK(a.value == 5.0);
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> order(g.edges.size());
    std::iota(order.begin(), order.end(), 0);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    auto s = greedy_single_cycle_forest(factor_graph(g), order);
    CHECK(std::accumulate(s.begin(), s.end(), 0) == 5);
  }
  CHECK_THROWS_AS(max_weight_single_cycle_forest(g, std::vector<double>(10, 0.0)), Error);
  CHECK_THROWS_AS(lp_upper_bound(g, std::vector<double>(10, 1.5)), Error);
}

TEST_CASE("samples from conv(F) lie in C and are reproducible") {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_hypergraph(rng);
    auto a = sample_conv_F(g, 10, 99);
    auto b = sample_conv_F(g, 10, 99);
    CHECK(a == b);
    for (const auto& rho : a) {
      CHECK(in_concavity_polytope(g, rho).member);
      CHECK(in_conv_F(g, rho).member);
    }
  }
  auto tree = factor_graph(oracle::random_tree(7, rng));
  for (const auto& rho : sample_conv_F(tree, 5, 1))
    for (double x : rho) CHECK(x == doctest::Approx(1.0));
}

TEST_CASE("pairwise trees fill the cube") {
  Rng rng(12);
  auto tree = factor_graph(oracle::random_tree(6, rng));
  for (int trial = 0; trial < 20; ++trial) {
    FactorWeights rho(tree.num_factors());
    for (double& x : rho) x = rng.uniform();
    CHECK(in_conv_F(tree, rho).member);
    CHECK(in_concavity_polytope(tree, rho).member);
  }
}

TEST_CASE("hull distance") {
  std::vector<std::vector<double>> square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  auto in = hull_distance(square, {0.3, 0.6});
  CHECK(in.distance <= kHullTolerance);
  double total = std::accumulate(in.coefficients.begin(), in.coefficients.end(), 0.0);
  CHECK(total == doctest::Approx(1.0));
  auto out = hull_distance(square, {2.0, 0.5});
  CHECK(out.distance == doctest::Approx(1.0));
  CHECK(out.separation > 0.0);
}

TEST_CASE("uniform thresholds") {
  auto k3 = uniform_weight_thresholds(GraphFamily::Complete, 3);
  CHECK(k3.rho_tree == doctest::Approx(2.0 / 3.0));
  CHECK(k3.rho_cycle == doctest::Approx(1.0));
  for (int n = 3; n <= 8; ++n) {
    auto c = uniform_weight_thresholds(GraphFamily::Complete, n);
    auto b = uniform_weight_thresholds(complete_graph(n));
    CHECK(c.rho_tree == doctest::Approx(b.rho_tree));
    CHECK(c.rho_cycle == doctest::Approx(b.rho_cycle));
  }
  for (int n : {9, 16}) {
    auto c = uniform_weight_thresholds(GraphFamily::Torus, n);
    auto b = uniform_weight_thresholds(torus_grid(n));
    CHECK(c.rho_tree == doctest::Approx(b.rho_tree));
    CHECK(c.rho_cycle == doctest::Approx(b.rho_cycle));
  }
  CHECK_THROWS_AS(uniform_weight_thresholds(GraphFamily::Complete, 2), Error);
  CHECK_THROWS_AS(uniform_weight_thresholds(GraphFamily::Torus, 8), Error);
  CHECK_THROWS_AS(uniform_weight_thresholds(GraphFamily::Torus, 4), Error);
}

TEST_CASE("uniform weight at the cycle threshold is in C") {
  for (int n = 3; n <= 7; ++n) {
    auto g = factor_graph(complete_graph(n));
    auto t = uniform_weight_thresholds(GraphFamily::Complete, n);
    CHECK(in_concavity_polytope(g, FactorWeights(g.num_factors(), t.rho_cycle)).member);
    CHECK_FALSE(in_concavity_polytope(g, FactorWeights(g.num_factors(), t.rho_cycle + 1e-6)).member);
  }
}
