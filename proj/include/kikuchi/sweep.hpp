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

#ifndef KIKUCHI_SWEEP_HPP
#define KIKUCHI_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kikuchi/message_passing.hpp"
#include "kikuchi/models.hpp"
#include "kikuchi/polytope.hpp"

namespace kikuchi {

/// "k5", "kN" (complete), "t9", "tN" (torus), or "file:<path>" (Ising JSON).
struct GraphSpec {
  enum class Kind { Complete, Torus, File };
  Kind kind = Kind::Complete;
  int n = 5;
  std::string path;
};

GraphSpec parse_graph_spec(const std::string& text);
std::string to_string(const GraphSpec& spec);

struct SweepConfig {
  GraphSpec graph;
  CouplingKind kind = CouplingKind::Mixed;
  std::uint64_t seed = 0;
  double rho_min = 0.0;
  double rho_max = 2.0;
  int rho_steps = 81;
  int inits = 8;
  /// Init i uses solver seed init_seed + i.
  std::uint64_t init_seed = 0;
  SolverOptions solver{0.5, 1e-10, 2500, Schedule::Parallel, InitKind::Random, 0};
  std::string out;
  int threads = 1;
};

/// Keys mirror the command-line flags: graph, kind, seed, rho_min, rho_max,
/// rho_steps, inits, init_seed, damping, tol, max_iters, schedule, out.
/// Unknown keys are rejected.
SweepConfig parse_sweep_config(const std::string& text, SweepConfig base = {});
void validate(const SweepConfig& config);

struct SweepRow {
  double rho = 0.0;
  std::uint64_t init_seed = 0;
  double objective = 0.0;
  double delta_final = 0.0;
  int iterations = 0;
  bool converged = false;
  double exact_logZ = 0.0;
};

struct SweepResult {
  IsingModel model;
  std::vector<SweepRow> rows;
  std::optional<Thresholds> thresholds;
  /// NaN when the model is too large for enumeration.
  double exact_logZ = 0.0;
};

/// rho_steps evenly spaced points from rho_min to rho_max inclusive.
std::vector<double> rho_grid(double rho_min, double rho_max, int rho_steps);

IsingModel sweep_model(const SweepConfig& config);

/// One pairwise solver run per (ρ, init) cell, fanned out over
/// config.threads workers; rows come back sorted by (ρ, init_seed). A cell
/// with ρ = 0 has no defined update and yields objective NaN, converged
/// false and zero iterations.
SweepResult run_sweep(const SweepConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
/// {"rho_tree": ..., "rho_cycle": ..., "exact_logZ": ...}; unknown values are null.
std::string sweep_meta_json(const SweepResult& result);

/// Per-ρ summary of a sweep. Objective statistics cover rows with a finite
/// objective, Δ statistics rows with a positive finite Δ; NaN when empty.
struct PlotRow {
  double rho = 0.0;
  int count = 0;
  double converged_fraction = 0.0;
  double objective_min = 0.0;
  double objective_max = 0.0;
  double objective_median = 0.0;
  double log10_delta_min = 0.0;
  double log10_delta_max = 0.0;
  double log10_delta_median = 0.0;
};

std::vector<PlotRow> plot_data(const std::vector<SweepRow>& rows);
void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows);

/// KIKUCHI_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
int default_threads();

}  // namespace kikuchi

#endif  // KIKUCHI_SWEEP_HPP
