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

#include "kikuchi/tangent_space.hpp"

#include <algorithm>

namespace kikuchi {

TangentSpace::TangentSpace(const RegionGraph& graph) {
  const int m = graph.num_regions();
  offsets_.assign(m + 1, 0);
  for (int r = 0; r < m; ++r) offsets_[r + 1] = offsets_[r] + graph.table_size(r);
  const auto pairs = graph.strict_containments();

  std::size_t rows = m;
  for (const auto& [u, t] : pairs) rows += graph.table_size(t);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(ambient_dimension()));
  Eigen::Index row = 0;
  for (int r = 0; r < m; ++r, ++row)
    for (std::size_t i = offsets_[r]; i < offsets_[r + 1]; ++i) a(row, i) = 1.0;
  for (const auto& [u, t] : pairs) {
    std::vector<int> cards;
    for (int v : graph.region(u)) cards.push_back(graph.domain_size(v));
    auto map = projection_map(graph.region(u), cards, graph.region(t));
    for (std::size_t i = 0; i < map.size(); ++i)
      a(row + static_cast<Eigen::Index>(map[i]), offsets_[u] + i) += 1.0;
    for (std::size_t j = 0; j < graph.table_size(t); ++j)
      a(row + static_cast<Eigen::Index>(j), offsets_[t] + j) -= 1.0;
    row += static_cast<Eigen::Index>(graph.table_size(t));
  }

  // Null space of a from the trailing columns of a rank-revealing QR of aᵀ.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  const Eigen::Index n = static_cast<Eigen::Index>(ambient_dimension());
  Eigen::MatrixXd q = qr.householderQ();
  basis_ = q.rightCols(n - rank);
}

Eigen::VectorXd TangentSpace::flatten(const RegionTables& tables) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(ambient_dimension()));
  for (std::size_t r = 0; r < tables.size(); ++r)
    for (std::size_t i = 0; i < tables[r].size(); ++i)
      v(static_cast<Eigen::Index>(offsets_[r] + i)) = tables[r][i];
  return v;
}

RegionTables TangentSpace::unflatten(const Eigen::VectorXd& v, const RegionTables& like) const {
  RegionTables out = like;
  for (std::size_t r = 0; r < out.size(); ++r)
    for (std::size_t i = 0; i < out[r].size(); ++i)
      out[r][i] = v(static_cast<Eigen::Index>(offsets_[r] + i));
  return out;
}

Eigen::VectorXd TangentSpace::project(const Eigen::VectorXd& v) const {
  return basis_ * (basis_.transpose() * v);
}

}  // namespace kikuchi
