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

#include "kikuchi/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kikuchi/errors.hpp"

namespace kikuchi {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("field \"") + key + "\": " + e.what());
  }
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::ParseError, "write failed for " + path);
}

IsingModel parse_ising(const std::string& text) {
  json j = parse_json(text);
  auto edges = field<std::vector<std::pair<int, int>>>(j, "edges");
  IsingModel m;
  m.graph = make_simple_graph(field<int>(j, "n"), edges);
  m.gamma_s = field<std::vector<double>>(j, "gamma_s");
  m.gamma_st = field<std::vector<double>>(j, "gamma_st");
  // make_simple_graph keeps the edge order, so gamma_st stays aligned.
  validate(m);
  return m;
}

IsingModel load_ising(const std::string& path) { return parse_ising(read_file(path)); }

std::string ising_to_json(const IsingModel& model) {
  json j;
  j["n"] = model.graph.num_vertices;
  j["edges"] = model.graph.edges;
  j["gamma_s"] = model.gamma_s;
  j["gamma_st"] = model.gamma_st;
  return j.dump(2) + "\n";
}

RegionModel parse_region_model(const std::string& text) {
  json j = parse_json(text);
  const int n = field<int>(j, "n");
  if (n < 1) throw Error(ErrorKind::ParseError, "\"n\" must be positive");
  std::vector<int> domains;
  if (j.contains("domain_sizes")) {
    domains = field<std::vector<int>>(j, "domain_sizes");
    if (static_cast<int>(domains.size()) != n)
      throw Error(ErrorKind::ParseError, "\"domain_sizes\" needs n entries");
  } else {
    domains.assign(n, j.contains("domain") ? field<int>(j, "domain") : 2);
  }
  std::vector<std::vector<int>> regions;
  if (j.contains("regions")) {
    regions = field<std::vector<std::vector<int>>>(j, "regions");
  } else {
    for (int v = 0; v < n; ++v) regions.push_back({v});
    for (auto& f : field<std::vector<std::vector<int>>>(j, "factors")) regions.push_back(f);
  }
  RegionModel out{RegionGraph::build(domains, regions), std::nullopt};
  if (j.contains("log_potentials")) {
    auto flat = field<std::vector<std::vector<double>>>(j, "log_potentials");
    if (static_cast<int>(flat.size()) != out.graph.num_regions())
      throw Error(ErrorKind::ParseError, "\"log_potentials\" needs one table per region");
    LogPotentials theta = region_tables(out.graph);
    for (int r = 0; r < out.graph.num_regions(); ++r) {
      if (flat[r].size() != theta[r].size())
        throw Error(ErrorKind::ParseError,
                    "log-potential table " + std::to_string(r) + " has the wrong size");
      theta[r].values = flat[r];
    }
    out.theta = std::move(theta);
  }
  return out;
}

RegionModel load_region_model(const std::string& path) {
  return parse_region_model(read_file(path));
}

std::vector<double> parse_weights(const std::string& text) {
  json j = parse_json(text);
  std::vector<double> w;
  try {
    w = j.is_array() ? j.get<std::vector<double>>() : field<std::vector<double>>(j, "rho");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (w.empty()) throw Error(ErrorKind::ParseError, "weight list is empty");
  return w;
}

std::vector<double> load_weights(const std::string& path) {
  return parse_weights(read_file(path));
}

}  // namespace kikuchi
