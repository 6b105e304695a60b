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
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kikuchi/errors.hpp"
#include "kikuchi/io.hpp"
#include "kikuchi/sweep.hpp"

using namespace kikuchi;

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_rows(const std::vector<SweepRow>& a, const std::vector<SweepRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i].rho, b[i].rho) || a[i].init_seed != b[i].init_seed ||
        !same(a[i].objective, b[i].objective) || !same(a[i].delta_final, b[i].delta_final) ||
        a[i].iterations != b[i].iterations || a[i].converged != b[i].converged ||
        !same(a[i].exact_logZ, b[i].exact_logZ))
      return false;
  return true;
}

SweepConfig small_config() {
  SweepConfig c;
  c.graph = parse_graph_spec("k4");
  c.seed = 2;
  c.rho_min = 0.0;
  c.rho_max = 1.0;
  c.rho_steps = 5;
  c.inits = 3;
  c.solver.max_iters = 400;
  return c;
}

}  // namespace

TEST_CASE("ising json round trip") {
  auto m = sample_ising(complete_graph(4), {CouplingKind::Mixed, 0.1, 2.0, 1});
  auto back = parse_ising(ising_to_json(m));
  CHECK(back.graph.edges == m.graph.edges);
  CHECK(back.gamma_s == m.gamma_s);
  CHECK(back.gamma_st == m.gamma_st);
  CHECK_THROWS_AS(parse_ising("{\"n\": 2}"), Error);
  CHECK_THROWS_AS(parse_ising("not json"), Error);
  CHECK_THROWS_AS(parse_ising(R"({"n":2,"edges":[[0,0]],"gamma_s":[0,0],"gamma_st":[1]})"), Error);
  CHECK_THROWS_AS(parse_ising(R"({"n":2,"edges":[[0,1]],"gamma_s":[0],"gamma_st":[1]})"), Error);
}

TEST_CASE("region models and weights") {
  auto m = parse_region_model(R"({"n": 5, "factors": [[0,1,2],[1,2,3],[2,3,4]]})");
  CHECK(m.graph.num_regions() == 8);
  CHECK(m.graph.region(0) == std::vector<int>{0});
  CHECK(m.graph.region(5) == std::vector<int>{0, 1, 2});
  CHECK_FALSE(m.theta.has_value());

  auto t = parse_region_model(R"({"n": 2, "domain": 3, "regions": [[0],[0,1]],
                                  "log_potentials": [[1,2,3],[0,0,0,0,0,0,0,0,0]]})");
  REQUIRE(t.theta.has_value());
  CHECK((*t.theta)[0].values == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(parse_region_model(R"({"n": 2, "regions": [[0]], "log_potentials": [[1]]})"), Error);
  CHECK_THROWS_AS(parse_region_model(R"({"n": 2, "domain_sizes": [2], "regions": [[0]]})"), Error);

  CHECK(parse_weights("[1, 0.5]") == std::vector<double>{1, 0.5});
  CHECK(parse_weights(R"({"rho": [0.25]})") == std::vector<double>{0.25});
  CHECK_THROWS_AS(parse_weights("[]"), Error);
  CHECK_THROWS_AS(parse_weights(R"({"weights": [1]})"), Error);
  CHECK_THROWS_AS(read_file("/nonexistent/kikuchi.json"), Error);
}

TEST_CASE("graph specs") {
  CHECK(to_string(parse_graph_spec("k5")) == "k5");
  CHECK(to_string(parse_graph_spec("t9")) == "t9");
  auto f = parse_graph_spec("file:model.json");
  CHECK(f.kind == GraphSpec::Kind::File);
  CHECK(f.path == "model.json");
  for (const char* bad : {"", "x5", "k", "k-1", "k5x", "file:"}) CHECK_THROWS_AS(parse_graph_spec(bad), Error);
}

TEST_CASE("sweep config parsing") {
  auto c = parse_sweep_config(R"({"graph": "t9", "kind": "attractive", "seed": 4, "rho_steps": 5,
                                  "schedule": "sequential", "tol": 1e-8, "out": "x.csv"})");
  CHECK(c.graph.kind == GraphSpec::Kind::Torus);
  CHECK(c.graph.n == 9);
  CHECK(c.kind == CouplingKind::Attractive);
  CHECK(c.seed == 4);
  CHECK(c.rho_steps == 5);
  CHECK(c.solver.schedule == Schedule::Sequential);
  CHECK(c.solver.tol == 1e-8);
  CHECK(c.solver.damping == 0.5);
  CHECK(c.out == "x.csv");
  CHECK_THROWS_AS(parse_sweep_config(R"({"grpah": "k5"})"), Error);
  CHECK_THROWS_AS(parse_sweep_config(R"({"kind": "ferro"})"), Error);
  CHECK_THROWS_AS(parse_sweep_config(R"({"seed": "one"})"), Error);
  CHECK_THROWS_AS(parse_sweep_config("[1]"), Error);

  SweepConfig bad;
  bad.rho_min = 1.0;
  bad.rho_max = 0.5;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = {};
  bad.solver.damping = 1.0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("rho grid") {
  auto g = rho_grid(0.0, 2.0, 81);
  CHECK(g.size() == 81);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 2.0);
  CHECK(g[40] == doctest::Approx(1.0));
  CHECK(rho_grid(0.5, 0.5, 1) == std::vector<double>{0.5});
}

TEST_CASE("sweep is independent of the thread count") {
  auto c = small_config();
  c.threads = 1;
  auto one = run_sweep(c);
  c.threads = 4;
  auto four = run_sweep(c);
  CHECK(one.rows.size() == 15);
  CHECK(same_rows(one.rows, four.rows));
  REQUIRE(one.thresholds.has_value());
  CHECK(one.thresholds->rho_tree == doctest::Approx(0.5));
  CHECK(std::isfinite(one.exact_logZ));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::isnan(one.rows[i].objective));
    CHECK_FALSE(one.rows[i].converged);
  }
  CHECK(one.rows[4].rho == 0.25);
  CHECK(one.rows[4].init_seed == 1);
}

TEST_CASE("csv round trip is exact") {
  auto res = run_sweep(small_config());
  res.rows.push_back({0.3, 7, NAN, INFINITY, 12, false, 1.0 / 3.0});
  std::stringstream ss;
  write_sweep_csv(ss, res.rows);
  auto back = read_sweep_csv(ss);
  CHECK(same_rows(res.rows, back));

  std::stringstream empty;
  CHECK_THROWS_AS(read_sweep_csv(empty), Error);
  std::stringstream header("rho,objective\n0.1,2\n");
  CHECK_THROWS_AS(read_sweep_csv(header), Error);
  std::stringstream flag("rho,init_seed,objective,delta_final,iterations,converged,exact_logZ\n0.1,0,1,1,1,yes,0\n");
  CHECK_THROWS_AS(read_sweep_csv(flag), Error);
}

TEST_CASE("meta json") {
  auto res = run_sweep(small_config());
  auto j = nlohmann::json::parse(sweep_meta_json(res));
  CHECK(j["rho_tree"].get<double>() == doctest::Approx(0.5));
  CHECK(j["rho_cycle"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(j["exact_logZ"].get<double>() == res.exact_logZ);
}

TEST_CASE("plot data") {
  std::vector<SweepRow> rows{{0.5, 0, 1.0, 1e-11, 10, true, 0.0},
                             {0.5, 1, 1.0, 1e-11, 10, true, 0.0},
                             {0.5, 2, 1.0, 1e-11, 10, true, 0.0},
                             {1.0, 0, 2.0, 1e-3, 99, false, 0.0},
                             {1.0, 1, 4.0, 1e-5, 99, true, 0.0},
                             {1.0, 2, NAN, INFINITY, 3, false, 0.0}};
  auto p = plot_data(rows);
  REQUIRE(p.size() == 2);
  CHECK(p[0].objective_min == p[0].objective_max);
  CHECK(p[0].converged_fraction == 1.0);
  CHECK(p[0].log10_delta_median == doctest::Approx(-11.0));
  CHECK(p[1].count == 3);
  CHECK(p[1].converged_fraction == doctest::Approx(1.0 / 3.0));
  CHECK(p[1].objective_min == 2.0);
  CHECK(p[1].objective_max == 4.0);
  CHECK(p[1].objective_median == 3.0);
  CHECK(p[1].log10_delta_max == doctest::Approx(-3.0));
  CHECK_THROWS_AS(plot_data({}), Error);
  std::stringstream ss;
  write_plot_csv(ss, p);
  std::string header;
  std::getline(ss, header);
  CHECK(header.rfind("rho,count,", 0) == 0);
}
