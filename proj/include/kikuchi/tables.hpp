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

#ifndef KIKUCHI_TABLES_HPP
#define KIKUCHI_TABLES_HPP

#include <cstddef>
#include <vector>

namespace kikuchi {

class RegionGraph;

/// Dense table over the joint assignments of a list of variables.
///
/// Layout is row-major in scope order with the last scope variable varying
/// fastest. The same table type holds potentials, log-potentials,
/// pseudomarginals and messages; which one is meant is up to the caller.
struct FactorTable {
  std::vector<int> scope;
  std::vector<int> cards;
  std::vector<double> values;

  FactorTable() = default;
  FactorTable(std::vector<int> scope, std::vector<int> cards, double fill = 0.0);

  static FactorTable uniform(std::vector<int> scope, std::vector<int> cards);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  double sum() const;
  /// Linear index of a joint assignment given in scope order.
  std::size_t index(const std::vector<int>& assignment) const;
  /// Inverse of index().
  std::vector<int> assignment(std::size_t index) const;
};

/// For every entry of a table over `from_scope`, the index of the matching
/// entry in a table over `to_scope` (which must be a subset). Throws
/// ScopeMismatch otherwise.
std::vector<std::size_t> projection_map(const std::vector<int>& from_scope,
                                        const std::vector<int>& from_cards,
                                        const std::vector<int>& to_scope);

/// Sums out every variable not in target_scope. The result's scope is
/// target_scope in the order given.
FactorTable marginalize(const FactorTable& table, const std::vector<int>& target_scope);

/// Divides by the total mass.
FactorTable normalized(FactorTable table);

/// Pointwise product over the sorted union of the two scopes.
FactorTable product(const FactorTable& a, const FactorTable& b);

/// Mass tolerance used to accept probability tables.
inline constexpr double kProbabilityTolerance = 1e-9;

/// -Σ p log p in nats, with 0 log 0 = 0. Throws NotNormalized if the table
/// has negative entries or does not sum to one within kProbabilityTolerance.
double entropy(const FactorTable& table);

/// Σ p log(p / q). Scopes must match exactly (ScopeMismatch); q = 0 where
/// p > 0 raises SupportViolation.
double kl_divergence(const FactorTable& p, const FactorTable& q);

/// One table per region, indexed like RegionGraph::regions(). Used both for
/// pseudomarginals τ and for log-potentials θ.
struct RegionTables {
  std::vector<FactorTable> tables;

  std::size_t size() const { return tables.size(); }
  FactorTable& operator[](std::size_t r) { return tables[r]; }
  const FactorTable& operator[](std::size_t r) const { return tables[r]; }
};

using Pseudomarginals = RegionTables;
using LogPotentials = RegionTables;

/// Empty table (filled with `fill`) for every region of the graph.
RegionTables region_tables(const RegionGraph& graph, double fill = 0.0);
/// Uniform distribution on every region.
Pseudomarginals uniform_pseudomarginals(const RegionGraph& graph);

}  // namespace kikuchi

#endif  // KIKUCHI_TABLES_HPP
