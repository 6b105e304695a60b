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

#ifndef KIKUCHI_IO_HPP
#define KIKUCHI_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "kikuchi/models.hpp"
#include "kikuchi/region_graph.hpp"
#include "kikuchi/tables.hpp"

namespace kikuchi {

/// {"n": 3, "edges": [[0,1], ...], "gamma_s": [...], "gamma_st": [...]}
IsingModel parse_ising(const std::string& text);
IsingModel load_ising(const std::string& path);
std::string ising_to_json(const IsingModel& model);

/// A region graph with optional log-potentials. The JSON object has
///   "n": vertex count, "domain": common domain size (default 2) or
///   "domain_sizes": per-vertex sizes,
///   and either "regions": [[...], ...] listing every region, or
///   "factors": [[...], ...] in which case the singletons {0}..{n-1} come
///   first and the factors follow.
/// "log_potentials", when present, holds one flat table per region in the
/// layout of FactorTable.
struct RegionModel {
  RegionGraph graph;
  std::optional<LogPotentials> theta;
};

RegionModel parse_region_model(const std::string& text);
RegionModel load_region_model(const std::string& path);

/// Either a bare JSON array or an object with a "rho" array.
std::vector<double> parse_weights(const std::string& text);
std::vector<double> load_weights(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace kikuchi

#endif  // KIKUCHI_IO_HPP
