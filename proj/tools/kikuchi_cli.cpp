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

// Command-line front end: sweeps, concavity and polytope queries, oracles.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kikuchi/concavity.hpp"
#include "kikuchi/errors.hpp"
#include "kikuchi/io.hpp"
#include "kikuchi/objective.hpp"
#include "kikuchi/polytope.hpp"
#include "kikuchi/region_graph.hpp"
#include "kikuchi/sweep.hpp"

using namespace kikuchi;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string set_string(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

// Region graphs for the polytope and concavity commands.
RegionGraph graph_for(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) return load_region_model(spec.substr(5)).graph;
  GraphSpec g = parse_graph_spec(spec);
  return pairwise_region_graph(g.kind == GraphSpec::Kind::Complete ? complete_graph(g.n)
                                                                   : torus_grid(g.n));
}

bool looks_like_ising(const std::string& text) {
  try {
    return json::parse(text).contains("gamma_s");
  } catch (const json::exception&) {
    return false;
  }
}

struct SweepFlags {
  std::string config, graph, kind, schedule, out;
  std::uint64_t seed = 0, init_seed = 0;
  double rho_min = 0, rho_max = 0, damping = 0, tol = 0;
  int rho_steps = 0, inits = 0, max_iters = 0;
};

void add_sweep(CLI::App& app) {
  auto* cmd = app.add_subcommand("sweep", "Run the pairwise solver over a grid of uniform edge weights");
  auto f = std::make_shared<SweepFlags>();
  cmd->add_option("--config", f->config, "JSON file with the same keys as the flags");
  cmd->add_option("--graph", f->graph, "k5, t9, kN, tN or file:<ising.json>");
  cmd->add_option("--kind", f->kind, "attractive or mixed")->check(CLI::IsMember({"attractive", "mixed"}));
  cmd->add_option("--seed", f->seed, "Model sampling seed");
  cmd->add_option("--rho-min", f->rho_min);
  cmd->add_option("--rho-max", f->rho_max);
  cmd->add_option("--rho-steps", f->rho_steps);
  cmd->add_option("--inits", f->inits, "Random initializations per grid point");
  cmd->add_option("--init-seed", f->init_seed, "Seed of the first initialization");
  cmd->add_option("--damping", f->damping, "Default 0.5");
  cmd->add_option("--tol", f->tol, "Default 1e-10");
  cmd->add_option("--max-iters", f->max_iters, "Default 2500");
  cmd->add_option("--schedule", f->schedule)->check(CLI::IsMember({"parallel", "sequential"}));
  cmd->add_option("--out", f->out, "CSV path; <out>.meta.json is written alongside");
  cmd->callback([cmd, f] {
    SweepConfig c;
    if (!f->config.empty()) c = parse_sweep_config(read_file(f->config));
    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (given("--graph")) c.graph = parse_graph_spec(f->graph);
    if (given("--kind")) c.kind = f->kind == "attractive" ? CouplingKind::Attractive : CouplingKind::Mixed;
    if (given("--seed")) c.seed = f->seed;
    if (given("--rho-min")) c.rho_min = f->rho_min;
    if (given("--rho-max")) c.rho_max = f->rho_max;
    if (given("--rho-steps")) c.rho_steps = f->rho_steps;
    if (given("--inits")) c.inits = f->inits;
    if (given("--init-seed")) c.init_seed = f->init_seed;
    if (given("--damping")) c.solver.damping = f->damping;
    if (given("--tol")) c.solver.tol = f->tol;
    if (given("--max-iters")) c.solver.max_iters = f->max_iters;
    if (given("--schedule"))
      c.solver.schedule = f->schedule == "parallel" ? Schedule::Parallel : Schedule::Sequential;
    if (given("--out")) c.out = f->out;
    if (c.out.empty()) throw Error(ErrorKind::ParseError, "sweep needs --out");
    c.threads = default_threads();

    SweepResult res = run_sweep(c);
    std::ostringstream csv;
    write_sweep_csv(csv, res.rows);
    write_file(c.out, csv.str());
    write_file(c.out + ".meta.json", sweep_meta_json(res));
    int converged = 0;
    for (const auto& r : res.rows) converged += r.converged;
    std::cout << "wrote " << res.rows.size() << " rows (" << converged << " converged) to "
              << c.out << "\n";
  });
}

void add_check(CLI::App& app) {
  auto* cmd = app.add_subcommand("check-concavity", "Test concavity of the weighted entropy");
  auto model = std::make_shared<std::string>();
  auto rho = std::make_shared<std::string>();
  cmd->add_option("--model", *model, "Region-graph JSON")->required();
  cmd->add_option("--rho", *rho,
                  "Weights JSON: one per region, or one per factor for the polytope test")
      ->required();
  cmd->callback([model, rho] {
    RegionModel m = load_region_model(*model);
    auto w = load_weights(*rho);
    if (static_cast<int>(w.size()) == m.graph.num_regions()) {
      auto rep = check_kikuchi_concavity(m.graph, WeightVector(w));
      std::cout << (rep.satisfied ? "concave: yes" : "concave: no") << "\n"
                << "min_value " << fmt(rep.min_value) << "\n";
      if (rep.violating_set) std::cout << "violating regions " << set_string(*rep.violating_set) << "\n";
      return;
    }
    FactorGraph g = factor_graph(two_layer_view(m.graph));
    if (static_cast<int>(w.size()) != g.num_factors())
      throw Error(ErrorKind::InvalidWeights, "weight count matches neither regions nor factors");
    auto rep = in_concavity_polytope(g, w);
    if (rep.member) {
      std::cout << "in C\n";
    } else if (rep.violating_U) {
      std::cout << "not in C; violating U = " << set_string(*rep.violating_U) << " (excess "
                << fmt(rep.violation) << ")\n";
    } else {
      std::cout << "not in C; weights outside [0,1]\n";
    }
  });
}

void add_polytope(CLI::App& app) {
  auto* cmd = app.add_subcommand("polytope", "Single-cycle-forest polytope tools");
  cmd->require_subcommand(1);

  auto* check = cmd->add_subcommand("check", "Membership of factor weights in C and conv(F)");
  auto model = std::make_shared<std::string>();
  auto rho = std::make_shared<std::string>();
  check->add_option("--model", *model, "Region-graph JSON (two-layer)")->required();
  check->add_option("--rho", *rho, "Factor weights JSON")->required();
  check->callback([model, rho] {
    FactorGraph g = factor_graph(two_layer_view(load_region_model(*model).graph));
    auto w = load_weights(*rho);
    auto c = in_concavity_polytope(g, w);
    std::cout << "in C: " << (c.member ? "yes" : "no") << "\n";
    if (c.violating_U) std::cout << "violating U = " << set_string(*c.violating_U) << "\n";
    if (g.num_factors() <= 20) {
      auto f = in_conv_F(g, w);
      std::cout << "in conv(F): " << (f.member ? "yes" : "no") << " (distance "
                << fmt(f.detail.distance) << (f.certified ? ", separation certified" : "")
                << ")\n";
    }
  });

  auto* sample = cmd->add_subcommand("sample", "Random weight vectors in conv(F)");
  auto graph = std::make_shared<std::string>("k5");
  auto count = std::make_shared<int>(1);
  auto seed = std::make_shared<std::uint64_t>(0);
  sample->add_option("--graph", *graph, "k5, t9, kN, tN or file:<region-graph.json>");
  sample->add_option("--count", *count)->check(CLI::PositiveNumber);
  sample->add_option("--seed", *seed);
  sample->callback([graph, count, seed] {
    FactorGraph g = factor_graph(two_layer_view(graph_for(*graph)));
    for (const auto& w : sample_conv_F(g, *count, *seed)) {
      json j = w;
      std::cout << j.dump() << "\n";
    }
  });

  auto* thr = cmd->add_subcommand("thresholds", "rho_tree and rho_cycle for uniform weights");
  auto tgraph = std::make_shared<std::string>("k5");
  thr->add_option("--graph", *tgraph, "kN, tN or file:<ising.json>");
  thr->callback([tgraph] {
    GraphSpec s = parse_graph_spec(*tgraph);
    Thresholds t;
    if (s.kind == GraphSpec::Kind::File)
      t = uniform_weight_thresholds(load_ising(s.path).graph);
    else
      t = uniform_weight_thresholds(
          s.kind == GraphSpec::Kind::Complete ? GraphFamily::Complete : GraphFamily::Torus, s.n);
    std::cout << "rho_tree " << fmt(t.rho_tree) << "\nrho_cycle " << fmt(t.rho_cycle) << "\n";
  });
}

void add_oracle(CLI::App& app) {
  auto* cmd = app.add_subcommand("oracle", "Exact log partition function by enumeration");
  auto model = std::make_shared<std::string>();
  auto marginals = std::make_shared<std::string>();
  cmd->add_option("--model", *model, "Ising JSON or region-graph JSON with log_potentials")->required();
  cmd->add_option("--marginals", *marginals, "Write region marginals as JSON");
  cmd->callback([model, marginals] {
    std::string text = read_file(*model);
    auto [g, theta] = [&]() -> std::pair<RegionGraph, LogPotentials> {
      if (looks_like_ising(text)) {
        IsingModel m = parse_ising(text);
        return {from_ising(m), ising_log_potentials(m)};
      }
      RegionModel rm = parse_region_model(text);
      LogPotentials t = rm.theta ? *rm.theta : region_tables(rm.graph);
      return {rm.graph, t};
    }();
    ExactResult r = exact_inference(g, theta, {std::size_t{1} << 26, default_threads()});
    std::cout << "logZ " << fmt(r.log_partition) << "\nentropy " << fmt(r.entropy) << "\n";
    if (!marginals->empty()) {
      json out = json::array();
      for (int k = 0; k < g.num_regions(); ++k)
        out.push_back({{"region", g.region(k)}, {"values", r.marginals[k].values}});
      write_file(*marginals, out.dump(2) + "\n");
    }
  });
}

void add_plot(CLI::App& app) {
  auto* cmd = app.add_subcommand("plot-data", "Per-rho aggregates of a sweep CSV");
  auto csv = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--csv", *csv, "Sweep CSV")->required();
  cmd->add_option("--out", *out, "Output CSV (stdout when omitted)");
  cmd->callback([csv, out] {
    std::ifstream in(*csv);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + *csv);
    auto rows = plot_data(read_sweep_csv(in));
    std::ostringstream ss;
    write_plot_csv(ss, rows);
    if (out->empty()) std::cout << ss.str();
    else write_file(*out, ss.str());
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reweighted Kikuchi approximations: solvers, concavity checks, experiments"};
  app.require_subcommand(1);
  add_sweep(app);
  add_check(app);
  add_polytope(app);
  add_oracle(app);
  add_plot(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
