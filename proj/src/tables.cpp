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

#include "kikuchi/tables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kikuchi/errors.hpp"
#include "kikuchi/region_graph.hpp"

namespace kikuchi {

namespace {

std::size_t product_of(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

// Entries below this are treated as exact zeros by entropy and KL.
constexpr double kTiny = 1e-300;

void require_probability(const FactorTable& t) {
  for (double v : t.values)
    if (!(v >= -kProbabilityTolerance))
      throw Error(ErrorKind::NotNormalized, "table has a negative entry");
  double s = t.sum();
  if (std::abs(s - 1.0) > kProbabilityTolerance)
    throw Error(ErrorKind::NotNormalized, "table sums to " + std::to_string(s));
}

}  // namespace

FactorTable::FactorTable(std::vector<int> scope_in, std::vector<int> cards_in, double fill)
    : scope(std::move(scope_in)), cards(std::move(cards_in)) {
  if (scope.size() != cards.size())
    throw Error(ErrorKind::ScopeMismatch, "scope and cardinalities differ in length");
  values.assign(product_of(cards), fill);
}

FactorTable FactorTable::uniform(std::vector<int> scope, std::vector<int> cards) {
  FactorTable t(std::move(scope), std::move(cards));
  std::fill(t.values.begin(), t.values.end(), 1.0 / static_cast<double>(t.size()));
  return t;
}

double FactorTable::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

std::size_t FactorTable::index(const std::vector<int>& a) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < cards.size(); ++i) idx = idx * cards[i] + a[i];
  return idx;
}

std::vector<int> FactorTable::assignment(std::size_t idx) const {
  std::vector<int> a(cards.size());
  for (std::size_t i = cards.size(); i-- > 0;) {
    a[i] = static_cast<int>(idx % cards[i]);
    idx /= cards[i];
  }
  return a;
}

std::vector<std::size_t> projection_map(const std::vector<int>& from_scope,
                                        const std::vector<int>& from_cards,
                                        const std::vector<int>& to_scope) {
  // Stride, in the target table, of each source variable (0 if summed out).
  std::vector<std::size_t> target_stride(from_scope.size(), 0);
  std::size_t stride = 1;
  for (std::size_t j = to_scope.size(); j-- > 0;) {
    auto it = std::find(from_scope.begin(), from_scope.end(), to_scope[j]);
    if (it == from_scope.end())
      throw Error(ErrorKind::ScopeMismatch,
                  "variable " + std::to_string(to_scope[j]) + " not in source scope");
    auto pos = static_cast<std::size_t>(it - from_scope.begin());
    target_stride[pos] = stride;
    stride *= static_cast<std::size_t>(from_cards[pos]);
  }
  std::vector<std::size_t> map(product_of(from_cards));
  std::vector<int> digit(from_scope.size(), 0);
  std::size_t target = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    map[i] = target;
    // Odometer increment, last variable fastest.
    for (std::size_t k = from_scope.size(); k-- > 0;) {
      if (++digit[k] < from_cards[k]) {
        target += target_stride[k];
        break;
      }
      target -= target_stride[k] * static_cast<std::size_t>(from_cards[k] - 1);
      digit[k] = 0;
    }
  }
  return map;
}

FactorTable marginalize(const FactorTable& table, const std::vector<int>& target_scope) {
  auto map = projection_map(table.scope, table.cards, target_scope);
  std::vector<int> cards;
  for (int v : target_scope) {
    auto pos = std::find(table.scope.begin(), table.scope.end(), v) - table.scope.begin();
    cards.push_back(table.cards[pos]);
  }
  FactorTable out(target_scope, std::move(cards));
  for (std::size_t i = 0; i < table.size(); ++i) out.values[map[i]] += table.values[i];
  return out;
}

FactorTable normalized(FactorTable table) {
  double s = table.sum();
  for (double& v : table.values) v /= s;
  return table;
}

FactorTable product(const FactorTable& a, const FactorTable& b) {
  std::vector<int> scope;
  std::vector<int> cards;
  auto card_of = [&](int v) {
    for (std::size_t i = 0; i < a.scope.size(); ++i)
      if (a.scope[i] == v) return a.cards[i];
    for (std::size_t i = 0; i < b.scope.size(); ++i)
      if (b.scope[i] == v) return b.cards[i];
    return 0;
  };
  scope = a.scope;
  scope.insert(scope.end(), b.scope.begin(), b.scope.end());
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  for (int v : scope) cards.push_back(card_of(v));
  FactorTable out(scope, cards);
  auto map_a = projection_map(scope, cards, a.scope);
  auto map_b = projection_map(scope, cards, b.scope);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.values[i] = a.values[map_a[i]] * b.values[map_b[i]];
  return out;
}

double entropy(const FactorTable& table) {
  require_probability(table);
  double h = 0.0;
  for (double p : table.values)
    if (p > kTiny) h -= p * std::log(p);
  return h;
}

double kl_divergence(const FactorTable& p, const FactorTable& q) {
  if (p.scope != q.scope || p.cards != q.cards)
    throw Error(ErrorKind::ScopeMismatch, "KL divergence needs identical scopes");
  require_probability(p);
  require_probability(q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.values[i] <= kTiny) continue;
    if (q.values[i] <= kTiny)
      throw Error(ErrorKind::SupportViolation, "p is not absolutely continuous w.r.t. q");
    d += p.values[i] * std::log(p.values[i] / q.values[i]);
  }
  return d;
}

RegionTables region_tables(const RegionGraph& graph, double fill) {
  RegionTables out;
  out.tables.reserve(graph.num_regions());
  for (int r = 0; r < graph.num_regions(); ++r) {
    std::vector<int> cards;
    for (int v : graph.region(r)) cards.push_back(graph.domain_size(v));
    out.tables.emplace_back(graph.region(r), std::move(cards), fill);
  }
  return out;
}

Pseudomarginals uniform_pseudomarginals(const RegionGraph& graph) {
  auto out = region_tables(graph);
  for (auto& t : out.tables)
    std::fill(t.values.begin(), t.values.end(), 1.0 / static_cast<double>(t.size()));
  return out;
}

}  // namespace kikuchi
