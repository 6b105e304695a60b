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

#include "kikuchi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kikuchi/errors.hpp"
#include "kikuchi/io.hpp"
#include "kikuchi/objective.hpp"

namespace kikuchi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kCsvHeader = "rho,init_seed,objective,delta_final,iterations,converged,exact_logZ";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int parse_positive(const std::string& s, const std::string& what) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || v < 1 || v > 1'000'000)
    throw Error(ErrorKind::ParseError, "bad " + what + ": " + s);
  return static_cast<int>(v);
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error(ErrorKind::ParseError, "bad number: " + s);
  return v;
}

}  // namespace

GraphSpec parse_graph_spec(const std::string& text) {
  GraphSpec spec;
  if (text.rfind("file:", 0) == 0) {
    spec.kind = GraphSpec::Kind::File;
    spec.path = text.substr(5);
    if (spec.path.empty()) throw Error(ErrorKind::ParseError, "empty graph file path");
    return spec;
  }
  if (text.size() < 2 || (text[0] != 'k' && text[0] != 't'))
    throw Error(ErrorKind::ParseError, "graph must be kN, tN or file:<path>, got " + text);
  spec.kind = text[0] == 'k' ? GraphSpec::Kind::Complete : GraphSpec::Kind::Torus;
  spec.n = parse_positive(text.substr(1), "graph size");
  return spec;
}

std::string to_string(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphSpec::Kind::Complete: return "k" + std::to_string(spec.n);
    case GraphSpec::Kind::Torus: return "t" + std::to_string(spec.n);
    case GraphSpec::Kind::File: return "file:" + spec.path;
  }
  return {};
}

SweepConfig parse_sweep_config(const std::string& text, SweepConfig c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "graph") c.graph = parse_graph_spec(v.get<std::string>());
      else if (key == "kind") {
        auto k = v.get<std::string>();
        if (k != "attractive" && k != "mixed")
          throw Error(ErrorKind::ParseError, "kind must be attractive or mixed");
        c.kind = k == "attractive" ? CouplingKind::Attractive : CouplingKind::Mixed;
      } else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "rho_min") c.rho_min = v.get<double>();
      else if (key == "rho_max") c.rho_max = v.get<double>();
      else if (key == "rho_steps") c.rho_steps = v.get<int>();
      else if (key == "inits") c.inits = v.get<int>();
      else if (key == "init_seed") c.init_seed = v.get<std::uint64_t>();
      else if (key == "damping") c.solver.damping = v.get<double>();
      else if (key == "tol") c.solver.tol = v.get<double>();
      else if (key == "max_iters") c.solver.max_iters = v.get<int>();
      else if (key == "schedule") {
        auto s = v.get<std::string>();
        if (s != "parallel" && s != "sequential")
          throw Error(ErrorKind::ParseError, "schedule must be parallel or sequential");
        c.solver.schedule = s == "parallel" ? Schedule::Parallel : Schedule::Sequential;
      } else if (key == "out") c.out = v.get<std::string>();
      else throw Error(ErrorKind::ParseError, "unknown config key \"" + key + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return c;
}

void validate(const SweepConfig& c) {
  if (!(c.rho_min <= c.rho_max) || c.rho_min < 0.0)
    throw Error(ErrorKind::ParseError, "need 0 <= rho_min <= rho_max");
  if (c.rho_steps < 1) throw Error(ErrorKind::ParseError, "rho_steps must be >= 1");
  if (c.inits < 1) throw Error(ErrorKind::ParseError, "inits must be >= 1");
  if (!(c.solver.damping >= 0.0 && c.solver.damping < 1.0))
    throw Error(ErrorKind::ParseError, "damping must be in [0, 1)");
  if (!(c.solver.tol > 0.0)) throw Error(ErrorKind::ParseError, "tol must be positive");
  if (c.solver.max_iters < 1) throw Error(ErrorKind::ParseError, "max_iters must be >= 1");
}

std::vector<double> rho_grid(double rho_min, double rho_max, int rho_steps) {
  if (rho_steps == 1) return {rho_min};
  std::vector<double> g(rho_steps);
  for (int i = 0; i < rho_steps; ++i)
    g[i] = i == rho_steps - 1 ? rho_max
                              : rho_min + (rho_max - rho_min) * i / (rho_steps - 1.0);
  return g;
}

IsingModel sweep_model(const SweepConfig& c) {
  switch (c.graph.kind) {
    case GraphSpec::Kind::File: return load_ising(c.graph.path);
    case GraphSpec::Kind::Complete:
      return sample_ising(complete_graph(c.graph.n), {c.kind, 0.1, 2.0, c.seed});
    case GraphSpec::Kind::Torus:
      return sample_ising(torus_grid(c.graph.n), {c.kind, 0.1, 2.0, c.seed});
  }
  throw Error(ErrorKind::ParseError, "unknown graph kind");
}

SweepResult run_sweep(const SweepConfig& c) {
  validate(c);
  SweepResult res;
  res.model = sweep_model(c);
  const auto& g = res.model.graph;
  switch (c.graph.kind) {
    case GraphSpec::Kind::Complete:
      res.thresholds = uniform_weight_thresholds(GraphFamily::Complete, c.graph.n);
      break;
    case GraphSpec::Kind::Torus:
      res.thresholds = uniform_weight_thresholds(GraphFamily::Torus, c.graph.n);
      break;
    case GraphSpec::Kind::File:
      if (!g.edges.empty() && g.num_vertices <= 20) res.thresholds = uniform_weight_thresholds(g);
      break;
  }
  try {
    res.exact_logZ = exact_log_partition(from_ising(res.model), ising_log_potentials(res.model),
                                         {std::size_t{1} << 26, c.threads});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::TooLarge) throw;
    res.exact_logZ = kNaN;
  }

  const auto grid = rho_grid(c.rho_min, c.rho_max, c.rho_steps);
  const std::size_t cells = grid.size() * static_cast<std::size_t>(c.inits);
  res.rows.resize(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      SweepRow& row = res.rows[i];
      row.rho = grid[i / c.inits];
      row.init_seed = c.init_seed + i % c.inits;
      row.exact_logZ = res.exact_logZ;
      if (row.rho <= 0.0) {
        row.objective = kNaN;
        row.delta_final = kNaN;
        continue;
      }
      SolverOptions opts = c.solver;
      opts.init = InitKind::Random;
      opts.seed = row.init_seed;
      try {
        auto r = run_pairwise_rsp(res.model, std::vector<double>(g.edges.size(), row.rho), opts);
        row.objective = r.objective.total;
        row.delta_final = r.delta_final;
        row.iterations = r.iterations;
        row.converged = r.converged;
      } catch (const NonFiniteMessage& e) {
        row.objective = kNaN;
        row.delta_final = std::numeric_limits<double>::infinity();
        row.iterations = e.iteration();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(c.threads, static_cast<int>(cells)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return res;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows)
    out << fmt(r.rho) << ',' << r.init_seed << ',' << fmt(r.objective) << ','
        << fmt(r.delta_final) << ',' << r.iterations << ',' << (r.converged ? "true" : "false")
        << ',' << fmt(r.exact_logZ) << '\n';
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error(ErrorKind::ParseError, "unexpected CSV header: " + line);
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != 7)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 7 cells");
    SweepRow r;
    r.rho = to_double(cells[0]);
    r.init_seed = std::strtoull(cells[1].c_str(), nullptr, 10);
    r.objective = to_double(cells[2]);
    r.delta_final = to_double(cells[3]);
    r.iterations = static_cast<int>(to_double(cells[4]));
    if (cells[5] != "true" && cells[5] != "false")
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad converged flag");
    r.converged = cells[5] == "true";
    r.exact_logZ = to_double(cells[6]);
    rows.push_back(r);
  }
  if (rows.empty()) throw Error(ErrorKind::ParseError, "CSV has no rows");
  return rows;
}

std::string sweep_meta_json(const SweepResult& res) {
  nlohmann::json j;
  j["rho_tree"] = res.thresholds ? nlohmann::json(res.thresholds->rho_tree) : nlohmann::json();
  j["rho_cycle"] = res.thresholds ? nlohmann::json(res.thresholds->rho_cycle) : nlohmann::json();
  j["exact_logZ"] = std::isfinite(res.exact_logZ) ? nlohmann::json(res.exact_logZ) : nlohmann::json();
  return j.dump(2) + "\n";
}

std::vector<PlotRow> plot_data(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw Error(ErrorKind::ParseError, "no sweep rows");
  std::map<double, std::vector<const SweepRow*>> by_rho;
  for (const auto& r : rows) by_rho[r.rho].push_back(&r);
  std::vector<PlotRow> out;
  for (const auto& [rho, group] : by_rho) {
    PlotRow p;
    p.rho = rho;
    p.count = static_cast<int>(group.size());
    std::vector<double> obj, logd;
    int conv = 0;
    for (const SweepRow* r : group) {
      conv += r->converged;
      if (std::isfinite(r->objective)) obj.push_back(r->objective);
      if (std::isfinite(r->delta_final) && r->delta_final > 0.0)
        logd.push_back(std::log10(r->delta_final));
    }
    p.converged_fraction = static_cast<double>(conv) / p.count;
    p.objective_min = obj.empty() ? kNaN : *std::min_element(obj.begin(), obj.end());
    p.objective_max = obj.empty() ? kNaN : *std::max_element(obj.begin(), obj.end());
    p.objective_median = median(obj);
    p.log10_delta_min = logd.empty() ? kNaN : *std::min_element(logd.begin(), logd.end());
    p.log10_delta_max = logd.empty() ? kNaN : *std::max_element(logd.begin(), logd.end());
    p.log10_delta_median = median(logd);
    out.push_back(p);
  }
  return out;
}

void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << "rho,count,converged_fraction,objective_min,objective_max,objective_median,"
         "log10_delta_min,log10_delta_max,log10_delta_median\n";
  for (const auto& p : rows)
    out << fmt(p.rho) << ',' << p.count << ',' << fmt(p.converged_fraction) << ','
        << fmt(p.objective_min) << ',' << fmt(p.objective_max) << ',' << fmt(p.objective_median)
        << ',' << fmt(p.log10_delta_min) << ',' << fmt(p.log10_delta_max) << ','
        << fmt(p.log10_delta_median) << '\n';
}

int default_threads() {
  if (const char* env = std::getenv("KIKUCHI_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*env != '\0' && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace kikuchi
